"""Pydantic models for instances, configurations and reports"""

from functools import cached_property
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Maximum layer distance of a candidate segment (two missing layers in between)
MAX_LAYER_GAP = 3

Preset = Literal["small", "medium", "large"]
BenchStatus = Literal["true", "false", "timeout", "skipped"]


# Geometry Models
class Hit(BaseModel):
    """A detector measurement"""

    model_config = ConfigDict(frozen=True)

    id: int = Field(..., ge=0, description="Index into the ordered hit list (0-based internally)")
    layer: int = Field(..., ge=1, description="Detector layer, 1..L")
    position: tuple[float, float, float] = Field(..., description="Coordinates in micrometers")


class Segment(BaseModel):
    """A directed pair of hits on two different layers"""

    model_config = ConfigDict(frozen=True)

    source: int = Field(..., ge=0, description="Hit id the segment leaves")
    target: int = Field(..., ge=0, description="Hit id the segment enters")
    length: float = Field(..., gt=0.0, description="Euclidean length in micrometers")


class Triplet(BaseModel):
    """Two consecutive segments (i, j) and (j, k) sharing the middle hit j"""

    model_config = ConfigDict(frozen=True)

    i: int = Field(..., ge=0)
    j: int = Field(..., ge=0)
    k: int = Field(..., ge=0)
    cos_beta: float = Field(..., ge=-1.0, le=1.0, description="Cosine of the turning angle")
    cost: float = Field(..., description="Pair cost in inverse micrometers")


class Instance(BaseModel):
    """Layers, hits, candidate segments, triplets and optional ground truth"""

    model_config = ConfigDict(frozen=True)

    num_layers: int = Field(..., ge=1, description="Number of detector layers L")
    hits: list[Hit] = Field(default_factory=list)
    segments: list[Segment] = Field(default_factory=list)
    triplets: list[Triplet] = Field(default_factory=list)
    truth: list[list[int]] | None = Field(None, description="Ground-truth tracks as ordered hit ids")

    @model_validator(mode="after")
    def _check_structure(self) -> "Instance":
        for index, hit in enumerate(self.hits):
            if hit.id != index:
                raise ValueError(f"hit ids must be dense and ordered, found id {hit.id} at position {index}")
            if hit.layer > self.num_layers:
                raise ValueError(f"hit {hit.id} on layer {hit.layer} outside 1..{self.num_layers}")

        num_hits = len(self.hits)
        pairs = set()
        for segment in self.segments:
            if segment.source >= num_hits or segment.target >= num_hits:
                raise ValueError(f"segment ({segment.source}, {segment.target}) references an unknown hit")
            gap = self.hits[segment.target].layer - self.hits[segment.source].layer
            if not 1 <= gap <= MAX_LAYER_GAP:
                raise ValueError(f"segment ({segment.source}, {segment.target}) spans {gap} layers")
            pairs.add((segment.source, segment.target))

        for triplet in self.triplets:
            if (triplet.i, triplet.j) not in pairs or (triplet.j, triplet.k) not in pairs:
                raise ValueError(f"triplet ({triplet.i}, {triplet.j}, {triplet.k}) uses a missing segment")

        if self.truth is not None:
            seen: set[int] = set()
            for track in self.truth:
                layers = [self.hits[h].layer for h in track if 0 <= h < num_hits]
                if len(layers) != len(track) or layers != list(range(1, self.num_layers + 1)):
                    raise ValueError(f"truth track {track} must hold exactly one hit per layer")
                seen.update(track)
            if len(seen) != num_hits or sum(len(t) for t in self.truth) != num_hits:
                raise ValueError("truth tracks must partition the hit set")
        return self

    @cached_property
    def segment_index(self) -> dict[tuple[int, int], int]:
        return {(s.source, s.target): ordinal for ordinal, s in enumerate(self.segments)}

    @cached_property
    def hits_by_layer(self) -> list[list[int]]:
        layers: list[list[int]] = [[] for _ in range(self.num_layers)]
        for hit in self.hits:
            layers[hit.layer - 1].append(hit.id)
        return layers

    @cached_property
    def in_segments(self) -> list[list[int]]:
        incoming: list[list[int]] = [[] for _ in self.hits]
        for ordinal, segment in enumerate(self.segments):
            incoming[segment.target].append(ordinal)
        return incoming

    @cached_property
    def out_segments(self) -> list[list[int]]:
        outgoing: list[list[int]] = [[] for _ in self.hits]
        for ordinal, segment in enumerate(self.segments):
            outgoing[segment.source].append(ordinal)
        return outgoing

    @property
    def receive_hits(self) -> list[int]:
        """Hits that must receive exactly one segment (layers 2..L)"""
        return [h.id for h in self.hits if h.layer >= 2]

    @property
    def send_hits(self) -> list[int]:
        """Hits that must send exactly one segment (layers 1..L-1)"""
        return [h.id for h in self.hits if h.layer <= self.num_layers - 1]


# Configuration Models
class FilterConfig(BaseModel):
    """Candidate segment and triplet admission rules"""

    model_config = ConfigDict(frozen=True)

    max_layer_skip: int = Field(2, ge=0, le=2, description="Missing layers allowed inside a segment")
    max_turning_angle: float = Field(0.35, gt=0.0, description="Largest admitted beta in radians")
    require_forward: bool = Field(True, description="Segments must advance along the layer axis")
    max_segment_angle: float | None = Field(
        0.5, gt=0.0, description="Acceptance cone around the layer axis in radians (None disables)"
    )


class GeneratorConfig(BaseModel):
    """Synthetic event parameters"""

    model_config = ConfigDict(frozen=True)

    num_tracks: int | None = Field(None, gt=0, description="Tracks per event (drawn from the preset when absent)")
    num_layers: int = Field(7, ge=3)
    layer_spacing: float = Field(100.0, gt=0.0, description="Distance between layers in micrometers")
    curvature: float = Field(0.05, ge=0.0, description="Largest per-layer direction change in radians")
    jitter: float = Field(0.0, ge=0.0, description="Transverse Gaussian hit smearing in micrometers")
    seed: int = 0
    preset: Preset | None = None
    track_pitch: float = Field(100.0, gt=0.0, description="Transverse spacing per track in micrometers")
    max_initial_angle: float = Field(0.1, ge=0.0, description="Largest polar angle at the first layer")
    max_polar_angle: float = Field(0.4, gt=0.0, description="Polar angle a track may never exceed")
    min_separation: float = Field(1.0, ge=0.0, description="Smallest distance between hits of one layer")
    max_retries: int = Field(100, ge=1)

    @model_validator(mode="after")
    def _check_size(self) -> "GeneratorConfig":
        if self.num_tracks is None and self.preset is None:
            raise ValueError("either num_tracks or preset is required")
        return self


class AnnealSchedule(BaseModel):
    """Simulated annealing schedule"""

    model_config = ConfigDict(frozen=True)

    initial_temperature: float | Literal["auto"] = Field("auto", description="Starting temperature or 'auto'")
    final_temperature: float | None = Field(None, gt=0.0, description="Defaults to final_ratio x initial")
    final_ratio: float = Field(1e-3, gt=0.0, lt=1.0, description="Final over initial temperature")
    sweeps: int = Field(100, ge=1, description="Geometric temperature steps, one full sweep each")
    restarts: int = Field(10, ge=1, description="Independent reads, seeded seed + r")
    seed: int = 0

    @model_validator(mode="after")
    def _check_temperatures(self) -> "AnnealSchedule":
        if self.initial_temperature != "auto":
            if self.initial_temperature <= 0:
                raise ValueError("initial temperature must be positive")
            if self.final_temperature is not None and self.final_temperature >= self.initial_temperature:
                raise ValueError("final temperature must be below the initial temperature")
        return self


# Report Models
class FeasibilityReport(BaseModel):
    """Per-hit degree counts of an assignment"""

    in_degree: list[int] = Field(..., description="Selected incoming segments per hit")
    out_degree: list[int] = Field(..., description="Selected outgoing segments per hit")
    violations: list[int] = Field(default_factory=list, description="Hits whose mandatory degree is not 1")
    feasible: bool


class SolveReport(BaseModel):
    """Result of one solver run"""

    method: str = Field(..., description="Method name (sa, exact, greedy)")
    assignment: list[int] = Field(..., description="Bit per candidate segment")
    objective: float = Field(..., description="alpha x sum of selected triplet costs")
    energy: float = Field(..., description="Model-specific energy")
    feasible: bool
    tracks: list[list[int]] | None = None
    wall_time: float = Field(0.0, description="Solve time in seconds")
    seed: int | None = None
    raw_objective: float | None = Field(None, description="Objective before repair (annealing only)")
    raw_feasible: bool | None = Field(None, description="Feasibility before repair (annealing only)")
    repaired: bool = False
    preprocessing_time: float = Field(0.0, description="Model build time in seconds")


class BenchRow(BaseModel):
    """One instance x method result line"""

    model_config = ConfigDict(populate_by_name=True)

    instance: str
    no_hits: int = Field(..., ge=0)
    method: str
    s_star: float | None = Field(None, alias="S_star", description="Reference objective")
    s: float | None = Field(None, alias="S", description="Method objective")
    tp: float = Field(0.0, alias="TP", description="Preprocessing seconds")
    tr: float = Field(0.0, alias="TR", description="Solve seconds")
    tt: float = Field(0.0, alias="TT", description="TP + TR")
    gap: float | None = Field(None, alias="GAP", description="Percent excess over the reference")
    feasible: BenchStatus = "true"
    seed: int | None = None

    @model_validator(mode="after")
    def _check_total(self) -> "BenchRow":
        if abs(self.tt - (self.tp + self.tr)) > 1e-9:
            raise ValueError(f"TT {self.tt} differs from TP + TR = {self.tp + self.tr}")
        return self

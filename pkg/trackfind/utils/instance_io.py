"""Instance file reading and writing"""

import logging
import math
import re
from collections.abc import Iterator
from pathlib import Path

from pydantic import ValidationError

from trackfind.errors import DegenerateSegmentError, InstanceFormatError
from trackfind.models import Hit, Instance, Segment, Triplet
from trackfind.utils.geometry import cos_beta, segment_length

logger = logging.getLogger(__name__)

MAGIC = "TRACKFIND"
FORMAT_VERSION = 1

_SEPARATORS = re.compile(r"[\s,]+")


def _fmt_cost(value: float) -> str:
    return format(value, ".17g")


def format_instance(instance: Instance) -> str:
    """Render an instance in the TRACKFIND text format (ids are 1-based on disk)"""
    lines = [f"{MAGIC} {FORMAT_VERSION}", f"LAYERS {instance.num_layers}", f"HITS {len(instance.hits)}"]
    for hit in instance.hits:
        x, y, z = hit.position
        lines.append(f"{hit.id + 1} {hit.layer} {x!r} {y!r} {z!r}")

    lines.append(f"SEGMENTS {len(instance.segments)}")
    lines.extend(f"{s.source + 1} {s.target + 1}" for s in instance.segments)

    lines.append(f"TRIPLETS {len(instance.triplets)}")
    lines.extend(f"{t.i + 1} {t.j + 1} {t.k + 1} {_fmt_cost(t.cost)}" for t in instance.triplets)

    if instance.truth is not None:
        lines.append(f"TRUTH {len(instance.truth)}")
        lines.extend(" ".join(str(h + 1) for h in track) for track in instance.truth)
    return "\n".join(lines) + "\n"


def write_instance(instance: Instance, path: str | Path) -> None:
    """Write an instance file; identical instances give identical bytes"""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_instance(instance))
    logger.debug(f"Wrote {len(instance.hits)} hits to {path}")


def _content_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    """Non-empty lines with comments removed, as (line number, fields)"""
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            yield number, content.split()


class _Cursor:
    """Sequential access to content lines with line-numbered errors"""

    def __init__(self, text: str):
        self._lines = list(_content_lines(text))
        self._position = 0
        self.line = 0

    def at_end(self) -> bool:
        return self._position >= len(self._lines)

    def peek_keyword(self) -> str | None:
        if self.at_end():
            return None
        return self._lines[self._position][1][0]

    def next(self, expected: str) -> list[str]:
        if self.at_end():
            raise InstanceFormatError(f"unexpected end of file, expected {expected}", self.line + 1)
        self.line, fields = self._lines[self._position]
        self._position += 1
        return fields

    def header(self, keyword: str) -> int:
        fields = self.next(f"'{keyword} <count>'")
        if len(fields) != 2 or fields[0] != keyword:
            raise InstanceFormatError(f"expected '{keyword} <count>', found '{' '.join(fields)}'", self.line)
        return self.integer(fields[1], minimum=0)

    def integer(self, token: str, minimum: int = 1) -> int:
        try:
            value = int(token)
        except ValueError:
            raise InstanceFormatError(f"expected an integer, found '{token}'", self.line)
        if value < minimum:
            raise InstanceFormatError(f"value {value} below {minimum}", self.line)
        return value

    def real(self, token: str) -> float:
        try:
            value = float(token)
        except ValueError:
            raise InstanceFormatError(f"expected a number, found '{token}'", self.line)
        if not math.isfinite(value):
            raise InstanceFormatError(f"non-finite number '{token}'", self.line)
        return value

    def hit_id(self, token: str, num_hits: int) -> int:
        value = self.integer(token)
        if value > num_hits:
            raise InstanceFormatError(f"hit id {value} outside 1..{num_hits}", self.line)
        return value - 1

    def row(self, width: int, expected: str) -> list[str]:
        fields = self.next(expected)
        if len(fields) != width:
            raise InstanceFormatError(f"expected {width} fields ({expected}), found {len(fields)}", self.line)
        return fields


def _build(num_layers: int, hits: list[Hit], segments, triplets, truth) -> Instance:
    try:
        return Instance(num_layers=num_layers, hits=hits, segments=segments, triplets=triplets, truth=truth)
    except ValidationError as e:
        raise InstanceFormatError(f"inconsistent instance: {e.errors()[0]['msg']}")


class InstanceParser:
    """Parse instance files in the TRACKFIND layout or the published-instance layout"""

    @staticmethod
    def parse_trackfind(text: str) -> Instance:
        cursor = _Cursor(text)
        fields = cursor.next(f"'{MAGIC} <version>'")
        if fields[0] != MAGIC or len(fields) != 2:
            raise InstanceFormatError(f"missing '{MAGIC}' header", cursor.line)
        version = cursor.integer(fields[1], minimum=0)
        if version != FORMAT_VERSION:
            raise InstanceFormatError(f"unsupported format version {version}, expected {FORMAT_VERSION}", cursor.line)

        num_layers = cursor.header("LAYERS")
        if num_layers < 1:
            raise InstanceFormatError("at least one layer is required", cursor.line)

        num_hits = cursor.header("HITS")
        slots: list[Hit | None] = [None] * num_hits
        for _ in range(num_hits):
            row = cursor.row(5, "id layer x y z")
            hit_id = cursor.hit_id(row[0], num_hits)
            layer = cursor.integer(row[1])
            if layer > num_layers:
                raise InstanceFormatError(f"layer {layer} outside 1..{num_layers}", cursor.line)
            if slots[hit_id] is not None:
                raise InstanceFormatError(f"duplicate hit id {hit_id + 1}", cursor.line)
            position = (cursor.real(row[2]), cursor.real(row[3]), cursor.real(row[4]))
            slots[hit_id] = Hit(id=hit_id, layer=layer, position=position)
        hits: list[Hit] = [h for h in slots if h is not None]

        segments = []
        lengths: dict[tuple[int, int], float] = {}
        for _ in range(cursor.header("SEGMENTS")):
            row = cursor.row(2, "from to")
            a, b = cursor.hit_id(row[0], num_hits), cursor.hit_id(row[1], num_hits)
            if (a, b) in lengths:
                raise InstanceFormatError(f"duplicate segment ({a + 1}, {b + 1})", cursor.line)
            try:
                length = segment_length(hits[a], hits[b])
            except DegenerateSegmentError as e:
                raise InstanceFormatError(e.detail, cursor.line)
            lengths[(a, b)] = length
            segments.append(Segment(source=a, target=b, length=length))

        triplets = []
        for _ in range(cursor.header("TRIPLETS")):
            row = cursor.row(4, "i j k cost")
            i, j, k = (cursor.hit_id(token, num_hits) for token in row[:3])
            cost = cursor.real(row[3])
            if (i, j) not in lengths or (j, k) not in lengths:
                raise InstanceFormatError(
                    f"triplet ({i + 1}, {j + 1}, {k + 1}) uses an undeclared segment", cursor.line
                )
            value = cos_beta(hits[i], hits[j], hits[k])
            expected = -value / (lengths[(i, j)] + lengths[(j, k)])
            if not math.isclose(cost, expected, rel_tol=1e-9, abs_tol=1e-15):
                raise InstanceFormatError(f"cost {row[3]} disagrees with geometry ({expected!r})", cursor.line)
            triplets.append(Triplet(i=i, j=j, k=k, cos_beta=value, cost=cost))

        truth = None
        if cursor.peek_keyword() == "TRUTH":
            truth = []
            for _ in range(cursor.header("TRUTH")):
                fields = cursor.next("a truth track")
                truth.append([cursor.hit_id(token, num_hits) for token in fields])

        if not cursor.at_end():
            cursor.next("end of file")
            raise InstanceFormatError("unexpected content after the last section", cursor.line)

        return _build(num_layers, hits, segments, triplets, truth)

    @staticmethod
    def parse_adapter(text: str) -> Instance:
        """
        Best-effort reader for published instances.

        Rows of five columns are hits (id layer x y z), rows of four columns
        are triplets (i j k cost); ids are 1-based. Segments are derived from
        the triplets and costs are kept as given.
        """
        hit_rows: list[tuple[int, list[str]]] = []
        triplet_rows: list[tuple[int, list[str]]] = []
        for number, raw in enumerate(text.splitlines(), start=1):
            content = raw.split("#", 1)[0].strip()
            if not content:
                continue
            fields = [f for f in _SEPARATORS.split(content) if f]
            if len(fields) == 5:
                hit_rows.append((number, fields))
            elif len(fields) == 4:
                triplet_rows.append((number, fields))
            else:
                raise InstanceFormatError(f"unrecognized row with {len(fields)} columns", number)
        if not hit_rows:
            raise InstanceFormatError("no hit rows found")

        def number_at(line: int, token: str, kind: type):
            try:
                return kind(float(token)) if kind is int else kind(token)
            except ValueError:
                raise InstanceFormatError(f"expected a number, found '{token}'", line)

        num_hits = len(hit_rows)
        slots: list[Hit | None] = [None] * num_hits
        for line, fields in hit_rows:
            hit_id = number_at(line, fields[0], int) - 1
            if not 0 <= hit_id < num_hits or slots[hit_id] is not None:
                raise InstanceFormatError(f"hit id {hit_id + 1} is out of range or repeated", line)
            layer = number_at(line, fields[1], int)
            if layer < 1:
                raise InstanceFormatError(f"layer {layer} below 1", line)
            position = tuple(number_at(line, token, float) for token in fields[2:])
            slots[hit_id] = Hit(id=hit_id, layer=layer, position=position)
        hits: list[Hit] = [h for h in slots if h is not None]

        lengths: dict[tuple[int, int], float] = {}
        triplets = []
        for line, fields in triplet_rows:
            i, j, k = (number_at(line, token, int) - 1 for token in fields[:3])
            if not all(0 <= h < num_hits for h in (i, j, k)):
                raise InstanceFormatError("triplet references an unknown hit", line)
            cost = number_at(line, fields[3], float)
            try:
                for pair in ((i, j), (j, k)):
                    if pair not in lengths:
                        lengths[pair] = segment_length(hits[pair[0]], hits[pair[1]])
                value = cos_beta(hits[i], hits[j], hits[k])
            except DegenerateSegmentError as e:
                raise InstanceFormatError(e.detail, line)
            expected = -value / (lengths[(i, j)] + lengths[(j, k)])
            if not math.isclose(cost, expected, rel_tol=1e-6, abs_tol=1e-12):
                logger.warning(f"Line {line}: stored cost {cost!r} differs from geometry {expected!r}, keeping stored")
            triplets.append(Triplet(i=i, j=j, k=k, cos_beta=value, cost=cost))

        segments = [Segment(source=a, target=b, length=length) for (a, b), length in sorted(lengths.items())]
        triplets.sort(key=lambda t: (t.i, t.j, t.k))
        num_layers = max(h.layer for h in hits)
        logger.info(f"Adapted published instance: {num_hits} hits, {len(segments)} segments, {len(triplets)} triplets")
        return _build(num_layers, hits, segments, triplets, None)

    @staticmethod
    def detect_format(text: str) -> str:
        """
        Detect the instance layout from the first content line

        Returns:
            'trackfind' when the magic header is present, 'adapter' otherwise
        """
        for _, fields in _content_lines(text):
            return "trackfind" if fields[0] == MAGIC else "adapter"
        raise InstanceFormatError("empty instance file")

    @classmethod
    def parse_file(cls, path: str | Path, format: str | None = None) -> Instance:
        """
        Parse an instance file, detecting its layout unless given

        Args:
            path: Path to the instance file
            format: Optional override ('trackfind', 'adapter')
        """
        with open(path, encoding="utf-8") as f:
            text = f.read()
        if format is None:
            format = cls.detect_format(text)
        if format == "trackfind":
            return cls.parse_trackfind(text)
        return cls.parse_adapter(text)


def read_instance(path: str | Path) -> Instance:
    """Read an instance file written by write_instance (or a published instance)"""
    instance = InstanceParser.parse_file(path)
    logger.debug(f"Read {len(instance.hits)} hits, {len(instance.triplets)} triplets from {path}")
    return instance

"""Solvers for the track-finding models"""

from trackfind.solvers.annealing import simulated_annealing
from trackfind.solvers.decoding import decode_tracks, encode_tracks, repair
from trackfind.solvers.exact import exact_search
from trackfind.solvers.greedy import greedy_baseline
from trackfind.solvers.pipeline import METHODS, run_method

__all__ = [
    "METHODS",
    "decode_tracks",
    "encode_tracks",
    "exact_search",
    "greedy_baseline",
    "repair",
    "run_method",
    "simulated_annealing",
]

"""mapkit: process mapping on 3-D topologies.

Workflow: load or generate a communication matrix (:mod:`mapkit.comm`),
build a topology (:mod:`mapkit.topology`), generate a mapping with one of
twelve algorithms (:mod:`mapkit.mapping`, :mod:`mapkit.aware`), score it
(:mod:`mapkit.quality`), then replay a trace on it (:mod:`mapkit.trace`,
:mod:`mapkit.simkernel`).  The ``mapkit`` console script wraps the same
steps as subcommands.
"""
from .aware import (map_bokhari, map_bipartition, map_fhgreedy, map_greedy,
                    map_greedy_allc, map_pacmap, map_topo_aware)
from .comm import (CommMatrix, MetricsReport, average_intensity, compute_metrics,
                   load_matrix_csv, neighbour_share, random_matrix, rank_dispersion,
                   ring_matrix, row_heterogeneity, save_matrix_csv, split_fraction,
                   traffic_imbalance)
from .mapping import (ALGORITHMS, AWARE_ALGORITHMS, DEFAULT_SEED,
                      OBLIVIOUS_ALGORITHMS, SEEDED_ALGORITHMS, Mapping,
                      default_seed, format_mapping, generate_mapping, read_mapping,
                      sfc_map, write_mapping)
from .quality import QualityReport, dilation, hop_stats, link_loads, quality_report
from .sfc import CURVES, curve
from .simkernel import (DeadlockError, ModelConfig, SimReport, SimulationError,
                        post_matrix, simulate, transfer_time)
from .topology import (DEFAULT_LINK_TABLE, OPTICAL, WIRELESS, LinkSpec, Route,
                       Topology, build_topology)
from .trace import (PATTERNS, Trace, TraceEvent, gen_trace, load_trace,
                    trace_matrices, write_trace)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS", "AWARE_ALGORITHMS", "CURVES", "CommMatrix", "DEFAULT_LINK_TABLE",
    "DEFAULT_SEED", "DeadlockError", "LinkSpec", "Mapping", "MetricsReport",
    "ModelConfig", "OBLIVIOUS_ALGORITHMS", "OPTICAL", "PATTERNS", "QualityReport",
    "Route", "SEEDED_ALGORITHMS", "SimReport", "SimulationError", "Topology",
    "Trace", "TraceEvent", "WIRELESS", "average_intensity", "build_topology",
    "compute_metrics", "curve", "default_seed", "dilation", "format_mapping",
    "gen_trace", "generate_mapping", "hop_stats", "link_loads", "load_matrix_csv",
    "load_trace", "map_bipartition", "map_bokhari", "map_fhgreedy", "map_greedy",
    "map_greedy_allc", "map_pacmap", "map_topo_aware", "neighbour_share",
    "post_matrix", "quality_report", "random_matrix", "rank_dispersion",
    "read_mapping", "ring_matrix", "row_heterogeneity", "save_matrix_csv",
    "sfc_map", "simulate", "split_fraction", "trace_matrices", "traffic_imbalance",
    "transfer_time", "write_mapping", "write_trace",
]

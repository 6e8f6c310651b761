"""Circuit builders for each memory-access construction."""
from .spec import BuilderSpec, build
from .unary import build_unary
from .recursive import build_recursive
from .bucket_brigade import build_bucket_brigade
from .bad_readout import build_bad_readout_bb
from .select_swap import build_select_swap
from .fanout_swap import build_fanout_swap_qraqm
from .parallel_sorted import build_parallel_sorted

__all__ = [
    "BuilderSpec",
    "build",
    "build_unary",
    "build_recursive",
    "build_bucket_brigade",
    "build_bad_readout_bb",
    "build_select_swap",
    "build_fanout_swap_qraqm",
    "build_parallel_sorted",
]

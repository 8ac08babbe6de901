"""Closure of the Fibonacci numbers in the p-adic integers: exact densities,
attained-residue trees, and p-adic interpolation of F(n)."""

from .density import (
    DensityReport,
    LucasZeroSet,
    WallExponentRecord,
    dens,
    lucas_zeros,
    square_density,
    wall_exponent,
)
from .errors import (
    DomainError,
    ExponentCapError,
    FibDensError,
    InternalInconsistencyError,
    InvalidArgumentError,
    NoConvergenceError,
    PrecisionError,
    ResourceError,
    UnsupportedError,
)
from .modfib import (
    FibPair,
    PeriodInfo,
    attains_all_residues,
    epsilon,
    fib_mod,
    fib_pair_mod,
    lucas_mod,
    period_info,
)
from .padic import (
    Basis,
    PAdicElement,
    hensel_root,
    interp_F,
    interp_F2,
    pexp,
    plog,
    sqrt5,
    teichmuller,
    zp,
)
from .scan import FileSink, MemorySink, ScanCheckpoint, ScanRecord, scan_range, wss_sweep
from .tree import AttainedSet, brute_attained, export_tree, fast_attained, import_tree, level_density

__version__ = "0.1.0"

from dataclasses import dataclass

SCHEMA_VERSION = "1"

# isolating intervals are refined to width <= 2**-DEFAULT_REFINE_BITS
DEFAULT_REFINE_BITS = 20

DEFAULT_ORACLE_SAMPLES = 4096
MAX_ORACLE_SAMPLES = 2**20


@dataclass(frozen=True)
class AnalysisOptions:
    """
    Knobs shared by the analysis pipeline and the command line.

    Parameters
    ----------
    refine_bits : int
        Isolating intervals are refined until their width is at most
        ``2**-refine_bits``.
    oracle_samples : int
        Initial grid size of the floating point oracle.
    oracle_max_samples : int
        The oracle doubles its grid up to this size before giving up.
    show_progress : bool
        Display a progress bar during batch analysis.
    jobs : int
        Number of worker processes for batch analysis.
    """

    refine_bits: int = DEFAULT_REFINE_BITS
    oracle_samples: int = DEFAULT_ORACLE_SAMPLES
    oracle_max_samples: int = MAX_ORACLE_SAMPLES
    show_progress: bool = True
    jobs: int = 1

    def __post_init__(self):
        if self.refine_bits < 1:
            raise ValueError(f"refine_bits must be positive, got {self.refine_bits}")
        if self.oracle_samples < 256:
            raise ValueError(
                f"oracle_samples must be at least 256, got {self.oracle_samples}"
            )
        if self.oracle_max_samples < self.oracle_samples:
            raise ValueError("oracle_max_samples must be >= oracle_samples")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")

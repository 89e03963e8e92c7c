"""pdfrel: laws of a random variable transformed by its own density.

Covers the pdf-related law ``K`` of ``f(X)``, residual lifetimes and the
laws ``K_t`` and ``G_t`` built on them, decreasing rearrangements, grid
deciders for stochastic orders, entropy and varentropy, and a Monte Carlo
oracle for cross-checking all of the above.
"""

__version__ = "0.1.0"

from .distributions import (  # noqa: E402
    Affine,
    Distribution,
    GridConfig,
    MonoKind,
    MonotoneClass,
    Support,
    Truncated,
    family_names,
    make_family,
)
from .errors import NumericalError, PdfRelError, PreconditionError  # noqa: E402
from .info import (  # noqa: E402
    entropy,
    ic_cdf,
    info_report,
    residual_entropy,
    residual_varentropy,
    varentropy,
    weibull_ratio,
)
from .inverses import im_plus, lower_inverse, upper_inverse  # noqa: E402
from .orders import check_mapping_conditions, check_order, mapping_phi, verify_theorem  # noqa: E402
from .pdf_related import (  # noqa: E402
    PdfRelatedLaw,
    check_uniform_characterization,
    monotone_pdf_related_inverse,
    pdf_related_cdf,
    pdf_related_quantiles,
)
from .rearrange import (  # noqa: E402
    RearrangedLaw,
    decreasing_rearrangement,
    level_measure,
    pdf_related_quantile_via_rearrangement,
    rearranged_cdf,
)
from .residual import (  # noqa: E402
    ResidualLife,
    cumulative_hazard_at,
    hazard_at,
    mean_residual_at,
    residual,
    residual_pdf_related_cdf,
    residual_pdf_related_inverse,
    residual_quantile,
    shifted_pdf_related_pdf,
    shifted_pdf_related_survival,
)

__all__ = [name for name in dir() if not name.startswith("_")]

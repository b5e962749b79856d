"""Backend selector: compiled kernels when the extension built, pure Python otherwise.

Set CGMOMENTS_PURE=1 to force the pure backend (used by the benchmark).
"""

import os

if os.environ.get("CGMOMENTS_PURE") == "1":
    from cgmoments import _purecore as _impl
else:
    try:
        from cgmoments import _fastcore as _impl  # type: ignore[attr-defined]
    except ImportError:
        from cgmoments import _purecore as _impl

BACKEND = _impl.BACKEND

kronecker = _impl.kronecker
is_squarefree = _impl.is_squarefree
is_fundamental = _impl.is_fundamental
fundamental_discriminants = _impl.fundamental_discriminants
reduce_form = _impl.reduce_form
reduced_forms = _impl.reduced_forms
smallest_prime_factors = _impl.smallest_prime_factors
chi_values = _impl.chi_values
lattice_values = _impl.lattice_values

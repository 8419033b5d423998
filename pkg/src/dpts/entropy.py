"""Shannon-type entropy helpers.

DPTS quantities are measured in base-4 units (one quaternary symbol = 1),
baseline protocols in bits.  All functions accept scalars or arrays.
"""

import numpy as np

LN4 = np.log(4.0)


def _checked(x):
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < 0) or np.any(x > 1):
        raise ValueError(f"probability outside [0, 1]: {x}")
    return x


def _xlogx(x):
    # natural-log x*ln(x) with the 0*ln(0) = 0 limit
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log(safe), 0.0)


def _out(r):
    return float(r) if np.ndim(r) == 0 else r


def entropy_s4(x):
    """``-x * log4(x)``, zero at ``x = 0``."""
    x = _checked(x)
    return _out(-_xlogx(x) / LN4)


def entropy_h4(x):
    """Binary entropy in base-4 units: ``S4(x) + S4(1 - x)``."""
    x = _checked(x)
    return _out(-(_xlogx(x) + _xlogx(1.0 - x)) / LN4)


def entropy_h2(x):
    """Binary entropy in bits.

    >>> entropy_h2(0.5)
    1.0
    """
    x = _checked(x)
    return _out(-(_xlogx(x) + _xlogx(1.0 - x)) / np.log(2.0))


def spectrum_entropy(eigenvalues, base=4.0):
    """``-sum(l * log_base(l))`` over a probability spectrum."""
    lam = _checked(eigenvalues)
    return float(-np.sum(_xlogx(lam)) / np.log(base))

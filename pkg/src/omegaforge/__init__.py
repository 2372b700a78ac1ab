"""omegaforge: a desk-scale computability laboratory.

Prefix-free program codes over a toy counter machine, exact rational
halting measures and their lower approximants, digit extraction through
threshold counting and bisection, brute-force equation families with the
value-set polynomial construction, and a register-machine compiler into
exponential equation systems with checkable witnesses.
"""

from . import bits, codes, dioph, dprm, errors, measures

__version__ = "0.1.0"

__all__ = ["bits", "codes", "dioph", "dprm", "errors", "measures", "__version__"]

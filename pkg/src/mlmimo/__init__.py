"""Neural multilevel MIMO detection toolkit.

Detection of real multilevel symbols over quasi-static flat MIMO
channels: exact ML oracles (sphere decoding / exhaustive search), linear
ZF/MMSE baselines, an unrolled multi-plateau-sigmoid detector network
with twin composition, principled training-statistics policies, and a
fundamental-parallelotope lattice detector. The enumeration hot path
runs on a compiled kernel when available (see mlmimo.kernels.BACKEND).
"""

from .kernels import BACKEND as kernel_backend

__version__ = "0.1.0"
__all__ = ["kernel_backend", "__version__"]

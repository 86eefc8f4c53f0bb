"""atom-deconv - deconvolution estimators for atomic distributions."""

__version__ = "0.1.0"
__author__ = "Destilabs"
__description__ = "Kernel-type deconvolution estimators for atomic distributions, with a Monte-Carlo rate harness and a minimax lower-bound lab"

"""Exact computation of Frobenius push-forward summands of line bundles on
smooth complete toric varieties, and machine-checked certificates for the
full strong exceptional collections they produce on toric Fano 3-folds."""

from .lattice_fan import Blowdown, Fan, FanError, ValidationReport, Wall

__all__ = ["Blowdown", "Fan", "FanError", "ValidationReport", "Wall"]

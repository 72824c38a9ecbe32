"""Exact Heisenberg-operator calculus for cohomology rings of Hilbert schemes of points."""
from .surface import CohClass, ModelError, SurfaceModel, TensorClass, load_model, validate

__all__ = ["CohClass", "ModelError", "SurfaceModel", "TensorClass", "load_model", "validate"]
__version__ = "0.1.0"

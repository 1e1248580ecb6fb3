"""fireda - wildfire reaction-diffusion simulation with ensemble Kalman data assimilation."""

__version__ = "0.1.0"

"""Disturbance-rejection workbench for continuous sliding-mode and robust PID control."""

__version__ = "0.1.0"

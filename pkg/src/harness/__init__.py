"""Experiment drivers, configuration and result emission."""

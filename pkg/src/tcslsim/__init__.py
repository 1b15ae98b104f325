"""tcslsim: statistical spatio-temporal channel simulator.

Generates multipath channel realizations with a time-cluster /
spatial-lobe structure, evaluates full-sphere antenna patterns,
applies directional (beam-pointed) filtering, and provides the
statistical machinery (two-sample Kolmogorov-Smirnov, moment
comparison, log-domain delay-spread statistics) used to validate
the simulator against measured delay-spread tables.
"""

__version__ = "0.1.0"

ANT3D_FORMAT_VERSION = 1
CONFIG_FORMAT_VERSION = 1

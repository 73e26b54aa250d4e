"""Line geometry over finite fields: Plücker coordinates, the Klein quadric,
linear line complexes, and incidence counting for the r^2 distance problem."""

__version__ = "0.1.0"

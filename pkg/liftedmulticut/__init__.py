__version__ = "0.1.0"

# Importing the solver modules registers them.
from . import exact, gaec, klj  # noqa: F401

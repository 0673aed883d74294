"""Audio emotion recognition from wavelet sub-band fractal dimensions.
"""

import importlib.metadata as importlib_metadata

try:
    _dist_meta = importlib_metadata.metadata("aertools")
except importlib_metadata.PackageNotFoundError:
    # running from a source checkout without an installed distribution
    __author__ = __description__ = __url__ = ""
    __project__ = "aertools"
    __version__ = "0.0.0+unknown"
else:
    __author__ = _dist_meta["Author"]
    __description__ = _dist_meta["Summary"]
    __project__ = _dist_meta["Name"]
    __url__ = _dist_meta.get("Home-page", "")
    __version__ = _dist_meta["Version"]
    del _dist_meta

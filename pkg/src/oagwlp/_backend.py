"""Kernel selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy fallback. Set ``OAGWLP_BACKEND=python`` to force the fallback.
"""

import importlib
import logging
import os

logger = logging.getLogger(__name__)

_MODULES = {"cython": "oagwlp._kernels", "python": "oagwlp._kernels_py"}


def load(name=None):
    """Return the kernel module for ``name`` (``"cython"`` or ``"python"``)."""
    if name is None:
        name = os.environ.get("OAGWLP_BACKEND", "").strip().lower() or None
    if name is not None:
        if name not in _MODULES:
            raise ValueError(f"unknown backend {name!r}; choose from {sorted(_MODULES)}")
        return importlib.import_module(_MODULES[name])
    try:
        return importlib.import_module(_MODULES["cython"])
    except ImportError:
        logger.debug("compiled kernels unavailable, using numpy fallback")
        return importlib.import_module(_MODULES["python"])


def available():
    names = []
    for name, mod in _MODULES.items():
        try:
            importlib.import_module(mod)
        except ImportError:
            continue
        names.append(name)
    return names


kernels = load()
BACKEND = "cython" if kernels.__name__.endswith("._kernels") else "python"

import sys

try:
    import relulim  # installed package
except ImportError:  # build-tree run: the extension sits on PYTHONPATH directly
    import _core

    sys.modules["relulim"] = _core

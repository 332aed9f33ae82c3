import os
import sys

# an installed wheel provides tailrisk directly; in a plain cmake build the
# extension sits in the build tree and the package sources in python/
module_dir = os.environ.get("TAILRISK_MODULE_DIR")
if module_dir:
    repo_root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    sys.path.insert(0, module_dir)
    sys.path.insert(0, os.path.join(repo_root, "python"))
    import importlib
    import importlib.util

    spec = importlib.util.find_spec("_tailrisk")
    if spec is not None:
        # make `tailrisk._tailrisk` resolvable from the build tree
        pkg_spec = importlib.util.find_spec("tailrisk")
        if pkg_spec is not None:
            module = importlib.import_module("_tailrisk")
            sys.modules["tailrisk._tailrisk"] = module

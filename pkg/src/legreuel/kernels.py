"""Select the term-list kernel backend.

The compiled extension is used when it was built; otherwise the pure-Python
module.  Set ``LEGREUEL_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("LEGREUEL_PURE_PYTHON"):
    from ._pykernels import *  # noqa: F401,F403

    BACKEND = "python"
else:
    try:
        from ._ckernels import *  # noqa: F401,F403

        BACKEND = "cython"
    except ImportError:
        from ._pykernels import *  # noqa: F401,F403

        BACKEND = "python"

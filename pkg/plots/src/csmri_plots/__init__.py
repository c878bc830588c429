"""Figure rendering for reconstruction experiment run directories.

Consumes only the files a completed run leaves behind (long-format CSVs and
flat binary arrays with JSON sidecars); it never imports the reconstruction
package itself.
"""

from .data import SchemaError, load_qq, load_subbands, load_traces
from .figures import FIGURES, FigureSpec, render

__all__ = [
    "SchemaError",
    "FigureSpec",
    "FIGURES",
    "render",
    "load_traces",
    "load_qq",
    "load_subbands",
]

__version__ = "0.1.0"

"""htmobility - human mobility mining through Head/Tail breaks."""

__version__ = "0.1.0"

from .render import GUIDES, KINDS, PlotSpec, SchemaError, load_table, render

__version__ = "0.1.0"

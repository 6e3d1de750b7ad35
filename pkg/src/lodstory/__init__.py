"""Query SPARQL endpoints, evaluate results into visual components, and
assemble them into exportable, publishable data stories."""

__version__ = "0.1.0"

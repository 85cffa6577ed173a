"""SAT to weighted crossing number: instance builder, drawings, audits and width certificates."""

__version__ = "0.1.0"

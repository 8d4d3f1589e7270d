"""Exception types shared across the package."""


class GraphError(ValueError):
    """Base class for graph construction and parsing failures."""


class GraphParseError(GraphError):
    """Input file violates the declared format (message carries the line number)."""


class EdgelessGraphError(GraphError):
    """Operation requires at least one edge (modularity is undefined when m = 0)."""


class PartitionMismatchError(ValueError):
    """Two partitions do not cover the same vertex set."""

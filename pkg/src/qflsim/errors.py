"""Exception types shared across the simulator.

The CLI maps these onto exit codes: config errors exit 2, data errors
(format, degenerate input, partition) exit 3, anything else exit 4.
"""


class QflError(Exception):
    """Base class for all qflsim errors."""


class CapacityError(QflError):
    """Requested qubit count is outside the supported range."""


class ConfigError(QflError):
    """Invalid experiment configuration (bad key, bad value, C > q, ...)."""


class DataFormatError(QflError):
    """Malformed input data: bad CSV row, wrong IDX magic, schema mismatch."""


class DegenerateInputError(QflError):
    """Input that is structurally valid but unusable (empty shard, all-zero vector)."""


class PartitionError(QflError):
    """Infeasible device/class assignment in the non-IID partitioner."""

"""
Exception hierarchy for the benchmark
"""

from typing import Optional


class BenchmarkError(Exception):
    """Base class for all benchmark errors"""


class DatasetError(BenchmarkError):
    """Invalid dataset, generator or noise arguments"""


class TableParseError(DatasetError):
    """Tabular dataset file could not be parsed"""

    def __init__(self, message: str, path: str, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = f"{path}:{line}" if line is not None else path
        super().__init__(f"{location}: {message}")


class ContractViolation(BenchmarkError):
    """Precondition of a pool or selection operation does not hold"""


class LearnerError(BenchmarkError):
    """Training or prediction failed"""


class ConfigurationError(BenchmarkError):
    """Experiment configuration cannot be executed"""


class ConfigFileError(ConfigurationError):
    """Benchmark configuration file could not be parsed"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class SuiteError(BenchmarkError):
    """A seed of a suite failed"""

    def __init__(self, seed: int, cause: BaseException):
        self.seed = seed
        self.cause = cause
        super().__init__(f"seed {seed} failed: {cause}")


class ReportError(BenchmarkError):
    """Result files could not be written or read"""

    def __init__(self, message: str, path: str):
        self.path = path
        super().__init__(f"{path}: {message}")

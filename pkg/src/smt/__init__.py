"""Block-maxima ratio test for the length of memory of stationary symmetric
alpha-stable random fields: closed-form laws, field simulators, the test
statistic, and a reproducible Monte Carlo harness."""

from .stable_core import (
    LimitLaw,
    RngStream,
    block_max_limit_cdf,
    c_alpha_constant,
    critical_value,
    frechet_cdf,
    null_cdf_t,
    null_pdf_t,
    sample_positive_stable,
    sample_sas,
    subgaussian_scale,
)
from .fields import (
    BoxSpec,
    FieldSpec,
    FieldRealization,
    SupportError,
    field_spec_string,
    make_field_spec,
    parse_field_kind,
    realize,
)
from .memory_test import (
    StatisticError,
    TestConfig,
    TestResult,
    compute_statistic,
    origin_box,
    shifted_box,
)
from .power_harness import (
    ExperimentGrid,
    LevelResult,
    PowerTable,
    empirical_level,
    empirical_power,
    ks_distance,
    null_statistic_sample,
    power_table,
    replication_samples,
    replication_stream,
    write_power_tables,
)

__version__ = "1.0.0"

__all__ = [
    "LimitLaw",
    "RngStream",
    "block_max_limit_cdf",
    "c_alpha_constant",
    "critical_value",
    "frechet_cdf",
    "null_cdf_t",
    "null_pdf_t",
    "sample_positive_stable",
    "sample_sas",
    "subgaussian_scale",
    "BoxSpec",
    "FieldSpec",
    "FieldRealization",
    "SupportError",
    "field_spec_string",
    "make_field_spec",
    "parse_field_kind",
    "realize",
    "StatisticError",
    "TestConfig",
    "TestResult",
    "compute_statistic",
    "origin_box",
    "shifted_box",
    "ExperimentGrid",
    "LevelResult",
    "PowerTable",
    "empirical_level",
    "empirical_power",
    "ks_distance",
    "null_statistic_sample",
    "power_table",
    "replication_samples",
    "replication_stream",
    "write_power_tables",
    "__version__",
]

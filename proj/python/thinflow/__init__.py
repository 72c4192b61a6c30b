from ._thinflow import (
    ConfigError,
    ThinflowError,
    format_double,
    render_config,
    run_command,
    sweep,
)

__all__ = [
    "ConfigError",
    "ThinflowError",
    "format_double",
    "render_config",
    "run_command",
    "sweep",
]

"""
Experiment harness: config files, presets, execution and reports.
"""

from .settings import RunnerConfig
from .config import ExperimentSpec, parse_config, parse_config_text
from .presets import PRESETS, Preset, PresetOutcome, get_preset
from .report import Report, load_report, emit_plotdata
from .harness import plan, execute, reaudit

__all__ = [
    # Settings
    'RunnerConfig',

    # Config files
    'ExperimentSpec',
    'parse_config',
    'parse_config_text',

    # Presets
    'PRESETS',
    'Preset',
    'PresetOutcome',
    'get_preset',

    # Execution and reports
    'plan',
    'execute',
    'reaudit',
    'Report',
    'load_report',
    'emit_plotdata',
]

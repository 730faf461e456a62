# Configuration, command dispatch and reports
from .config_schema import GapConfig, RepresentationConfig, RunConfig, parse_config
from .report import ReportDocument, emit_report, parse_report, spectrum_to_dict, write_report
from .commands import COMMANDS, build_representation, run_command
from .cli import main

from src.main.config import COMMANDS
from src.main.constants import OutputFormat
from src.main.controller.v1.base_controller import command_handler, render
from src.main.models.v1 import ExperimentConfigModel, SolverOptionsModel
from src.main.services.v1.experiment_service import damping_scan


@command_handler(COMMANDS.damping)
def damping_command(config: ExperimentConfigModel) -> str:
    report = damping_scan(config.gamma_grid, config.copies, config.lam, config.workers,
                          SolverOptionsModel.from_config())
    return render(config, report.model_dump(mode="json"), default=OutputFormat.CSV, csv_text=report.to_csv())

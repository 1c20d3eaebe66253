from src.main.config import COMMANDS
from src.main.controller.v1.base_controller import command_handler, render, resolve_channel
from src.main.models.v1 import ExperimentConfigModel, SolverOptionsModel
from src.main.services.v1.cost_service import ent_cost_ppt


@command_handler(COMMANDS.entcost)
def entcost_command(config: ExperimentConfigModel) -> str:
    first = resolve_channel(config.first, "--a")
    second = resolve_channel(config.second, "--b")
    report = ent_cost_ppt(first, second, config.lam, eq_tol=config.eq_tol, k_max=config.k_max,
                          workers=config.workers, options=SolverOptionsModel.from_config())
    return render(config, report.model_dump(mode="json"), csv_text=report.to_csv())

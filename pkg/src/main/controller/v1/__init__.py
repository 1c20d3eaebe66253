from src.main.controller.v1.base_controller import CommandResult
from src.main.controller.v1.cost_controller import entcost_command
from src.main.controller.v1.discrimination_controller import composite_command, global_command, psucc_command
from src.main.controller.v1.experiment_controller import damping_command
from src.main.controller.v1.symmetry_controller import lp_command

__all__ = ["CommandResult", "global_command", "psucc_command", "composite_command", "entcost_command",
           "lp_command", "damping_command"]

from src.main.models.v1.common_model import ResponseModel
from src.main.models.v1.labeled_matrix_model import LabeledMatrixModel, RegisterModel
from src.main.models.v1.solver_model import SolverOptionsModel, BackendResultModel
from src.main.models.v1.channel_model import ChannelSpecModel
from src.main.models.v1.cost_model import CostReportModel, KPointModel
from src.main.models.v1.experiment_model import ExperimentConfigModel, DampingReportModel, DampingRowModel

__all__ = ["ResponseModel", "LabeledMatrixModel", "RegisterModel", "SolverOptionsModel", "BackendResultModel",
           "ChannelSpecModel", "CostReportModel", "KPointModel", "ExperimentConfigModel", "DampingReportModel",
           "DampingRowModel"]

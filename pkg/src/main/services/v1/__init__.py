from src.main.services.v1.channel_service import ChannelEnsemble, ChoiOperator, build_channel
from src.main.services.v1.composite_service import ParamChannelSet, composite_psucc
from src.main.services.v1.cost_service import ent_cost_ppt, gap_at_k, global_benchmark, scan_ppt_k
from src.main.services.v1.discrimination_service import (DiscriminationInstance, diamond_dual, psucc_global,
                                                         psucc_ppt_k, psucc_ppt_k_dual)
from src.main.services.v1.experiment_service import damping_scan

__all__ = ["ChannelEnsemble", "ChoiOperator", "build_channel", "ParamChannelSet", "composite_psucc",
           "ent_cost_ppt", "gap_at_k", "global_benchmark", "scan_ppt_k", "DiscriminationInstance",
           "diamond_dual", "psucc_global", "psucc_ppt_k", "psucc_ppt_k_dual", "damping_scan"]

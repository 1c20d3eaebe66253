from src.main.config import COMMANDS
from src.main.constants.error_messages import SPEC_PARSE_ERROR
from src.main.exceptions import ValidationException
from src.main.controller.v1.base_controller import command_handler, render, resolve_channel
from src.main.models.v1 import ExperimentConfigModel, SolverOptionsModel
from src.main.services.v1.channel_service import ChannelEnsemble
from src.main.services.v1.composite_service import ParamChannelSet, composite_psucc
from src.main.services.v1.discrimination_service import DiscriminationInstance, psucc_global, psucc_ppt_k


@command_handler(COMMANDS.global_value)
def global_command(config: ExperimentConfigModel) -> str:
    first = resolve_channel(config.first, "--a")
    second = resolve_channel(config.second, "--b")
    solution = psucc_global(ChannelEnsemble.binary(first, second, config.lam), SolverOptionsModel.from_config())
    return render(config, {"value": solution.value})


@command_handler(COMMANDS.psucc)
def psucc_command(config: ExperimentConfigModel) -> str:
    first = resolve_channel(config.first, "--a")
    second = resolve_channel(config.second, "--b")
    inst = DiscriminationInstance.binary(first, second, config.lam, config.k)
    solution = psucc_ppt_k(inst, SolverOptionsModel.from_config(), with_dual=config.with_dual)
    data = {"value": solution.value, "k": solution.k}
    if config.with_dual:
        data["dual_value"] = solution.dual_value
    return render(config, data)


def _channel_set(config: ExperimentConfigModel, side: str) -> ParamChannelSet:
    single = getattr(config, side)
    lo, hi = getattr(config, f"{side}_lo"), getattr(config, f"{side}_hi")
    flag = "--a" if side == "first" else "--b"
    if lo or hi:
        if single or not (lo and hi):
            raise ValidationException(f"{SPEC_PARSE_ERROR}: give either {flag} or both {flag}-lo and {flag}-hi")
        return ParamChannelSet.segment(resolve_channel(lo, f"{flag}-lo"), resolve_channel(hi, f"{flag}-hi"))
    return ParamChannelSet.singleton(resolve_channel(single, flag))


@command_handler(COMMANDS.composite)
def composite_command(config: ExperimentConfigModel) -> str:
    first, second = _channel_set(config, "first"), _channel_set(config, "second")
    solution = composite_psucc(first, second, config.lam, config.k, SolverOptionsModel.from_config())
    return render(config, {"value": solution.value, "k": config.k, "params": solution.params})

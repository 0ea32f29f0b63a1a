# src/schedmath/__init__.py
from .schedule import (DiffusionSchedule, linear_beta_schedule, rescale_zero_terminal_snr,
                       snr, schedule_table)
from .latents import LatentSample, add_noise, v_target, v_to_epsilon, v_to_x0, loss_4v

__all__ = [
    "DiffusionSchedule", "linear_beta_schedule", "rescale_zero_terminal_snr", "snr", "schedule_table",
    "LatentSample", "add_noise", "v_target", "v_to_epsilon", "v_to_x0", "loss_4v",
]

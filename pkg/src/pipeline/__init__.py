# src/pipeline/__init__.py
from .config import PipelineConfig, load_config, parse_config, serialize_config
from .manifest import RunManifest, read_manifest
from .commands import cmd_synth, cmd_extract, cmd_refine, cmd_render, cmd_eval, cmd_schedule

__all__ = [
    "PipelineConfig", "load_config", "parse_config", "serialize_config", "RunManifest", "read_manifest",
    "cmd_synth", "cmd_extract", "cmd_refine", "cmd_render", "cmd_eval", "cmd_schedule",
]

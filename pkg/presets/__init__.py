# Preset groups resolvable by name without a group file.
from presets.config import PRESET_GROUPS, get_preset, get_preset_table, preset_names

__all__ = ["PRESET_GROUPS", "get_preset", "get_preset_table", "preset_names"]

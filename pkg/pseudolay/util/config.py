# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import json
from contextlib import contextmanager


# Validator to check if the value entered is of type bool
def bool_validator(key, value):
    if type(value) is not bool:
        raise TypeError(
            (
                'Error loading configuration: The Value "{}" for Configuration "{}" '
                + "must be of type Bool"
            ).format(value, key)
        )
    else:
        return True


# Validator to check if the value entered is a non-empty string
def str_validator(key, value):
    if type(value) is not str or not value:
        raise TypeError(
            (
                'Error loading configuration: The Value "{}" for Configuration "{}" '
                + "must be a non-empty string"
            ).format(value, key)
        )
    else:
        return True


def _int_validator(minimum):
    # Validator to check if the value entered is an int no smaller than minimum
    def validator(key, value):
        if type(value) is not int:
            raise TypeError(
                (
                    'Error loading configuration: The Value "{}" for Configuration '
                    + '"{}" must be of type int'
                ).format(value, key)
            )
        if value < minimum:
            raise ValueError(
                (
                    'Error loading configuration: The Value "{}" for Configuration '
                    + '"{}" must be at least {}'
                ).format(value, key, minimum)
            )
        return True

    return validator


def _fraction_validator(low, high, low_inclusive=True):
    # Validator to check if the value entered is a number within [low, high]
    # (or (low, high] when low_inclusive is False). Ints are accepted so that
    # JSON configs may write 0 or 1.
    def validator(key, value):
        if type(value) not in (int, float):
            raise TypeError(
                (
                    'Error loading configuration: The Value "{}" for Configuration '
                    + '"{}" must be of type float'
                ).format(value, key)
            )
        above_low = value >= low if low_inclusive else value > low
        if not above_low or value > high:
            raise ValueError(
                (
                    'Error loading configuration: The Value "{}" for Configuration '
                    + '"{}" must lie in {}{}, {}]'
                ).format(value, key, "[" if low_inclusive else "(", low, high)
            )
        return True

    return validator


def _choice_validator(choices):
    def validator(key, value):
        if type(value) is bool or value not in choices:
            raise ValueError(
                (
                    'Error loading configuration: The Value "{}" for Configuration '
                    + '"{}" must be one of {}'
                ).format(value, key, ", ".join(str(c) for c in choices))
            )
        return True

    return validator


LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]

# Validator to check if the value entered is a valid log level
log_level_validator = _choice_validator(LOG_LEVELS)


registered_options = {
    "log_level": {
        "default": "INFO",
        "validator": log_level_validator,
    },
    # segmenter
    "kernel_w": {"default": 2, "validator": _int_validator(1)},
    "kernel_h": {"default": 2, "validator": _int_validator(1)},
    "patience": {"default": 3, "validator": _int_validator(1)},
    "min_aggregation_ratio": {
        "default": 0.5,
        "validator": _fraction_validator(0.0, 1.0, low_inclusive=False),
    },
    "max_iterations": {"default": 50, "validator": _int_validator(1)},
    # aligner
    "sim_threshold": {
        "default": 0.8,
        "validator": _fraction_validator(0.0, 1.0, low_inclusive=False),
    },
    "psi": {"default": 0.1, "validator": _fraction_validator(0.0, float("inf"))},
    "activation_mode": {
        "default": "sum",
        "validator": _choice_validator(["sum", "any"]),
    },
    # pseudo_labeler
    "phi": {"default": 1, "validator": _int_validator(0)},
    "category": {"default": "attorney_profile", "validator": str_validator},
    # postproc
    "confidence_threshold": {
        "default": 0.5,
        "validator": _fraction_validator(0.0, 1.0),
    },
    "major_line_threshold": {"default": 5, "validator": _int_validator(0)},
    "attach_min_overlap": {
        "default": 0.5,
        "validator": _fraction_validator(0.0, 1.0, low_inclusive=False),
    },
    "exclude_pro_se": {"default": False, "validator": bool_validator},
    # eval
    "ignore_case": {"default": False, "validator": bool_validator},
    # synth
    "seed": {"default": 0, "validator": _int_validator(0)},
    "columns": {"default": 2, "validator": _choice_validator([1, 2])},
    "profiles_per_page": {"default": 2, "validator": _choice_validator(range(1, 7))},
    "noise_rate": {"default": 0.0, "validator": _fraction_validator(0.0, 1.0)},
    "scramble": {"default": True, "validator": bool_validator},
    # cli
    "jobs": {"default": 1, "validator": _int_validator(1)},
    "split": {"default": False, "validator": bool_validator},
}

global_config = {key: registered_options[key]["default"] for key in registered_options}


# Returns the current value of the specific config key
def get_option(key):
    if not key or key not in registered_options:
        raise ValueError("No such keys(s)")
    else:
        return global_config[key]


# Updates the value of the specified key
def set_option(key, val):
    if not key or key not in registered_options:
        raise ValueError("No such keys(s): {}".format(key))

    validator = registered_options[key]["validator"]

    if validator(key, val):
        global_config[key] = val


# Resets the value of the specfied key
# If "all" is passed in, resets values of all keys
def reset_option(key):
    if not key:
        raise ValueError("No such keys(s)")

    if key in registered_options:
        global_config[key] = registered_options[key]["default"]
    elif key == "all":
        for k in registered_options:
            global_config[k] = registered_options[k]["default"]
    else:
        raise ValueError(
            "You must specify a valid key. Or, use the special keyword "
            '"all" to reset all the options to their default value'
        )


def load_config(filename):
    """Apply every key of a JSON config file through set_option.

    Keys mirror the option names above; an unknown key raises ValueError
    before any option is changed.
    """
    with open(filename, "r", encoding="utf-8") as f:
        values = json.load(f)

    if not isinstance(values, dict):
        raise ValueError("Config file {} must hold a JSON object".format(filename))

    unknown = sorted(set(values) - set(registered_options))
    if unknown:
        raise ValueError("Unknown configuration key(s): {}".format(", ".join(unknown)))

    for key in sorted(values):
        set_option(key, values[key])

    return dict(global_config)


@contextmanager
def option_context(**overrides):
    """Temporarily set options, restoring the previous values on exit."""
    saved = {key: get_option(key) for key in overrides}
    try:
        for key, val in overrides.items():
            set_option(key, val)
        yield
    finally:
        global_config.update(saved)

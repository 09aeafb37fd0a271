#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import copy
import os
import pathlib

import yaml

CONFIG_PATH = "config.yaml"


def abs_path(config_path=CONFIG_PATH):
    return pathlib.Path(os.getcwd(), config_path)


def merge(base, override):
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def load(config_path=CONFIG_PATH):
    path = str(abs_path(config_path))
    with open(path, "r", encoding="utf-8") as file:
        config = yaml.load(file, Loader=yaml.SafeLoader)
        if config is None:
            config = {}
        config["base_dir"] = abs_path(config_path).parent
        return config


# NOTE: 設定ファイルが無い場合は組み込みの既定値だけで動かす．
# 明示的に指定されたファイルが無い場合は load() が例外を投げる．
def load_with_default(default, config_path=None):
    if config_path is None:
        if not abs_path(CONFIG_PATH).exists():
            config = copy.deepcopy(default)
            config["base_dir"] = abs_path(CONFIG_PATH).parent
            return config
        config_path = CONFIG_PATH

    return merge(default, load(config_path))

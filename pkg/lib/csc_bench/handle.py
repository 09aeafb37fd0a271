#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import pathlib
import sys

import enlighten

import csc_bench.const


def create(config, out_dir=None):
    handle = {
        # NOTE: 標準出力はデータ用なので，進捗表示は標準エラー出力に出す
        "progress_manager": enlighten.get_manager(stream=sys.stderr),
        "progress_bar": {},
        "config": config,
    }
    if out_dir is not None:
        handle["out_dir"] = pathlib.Path(out_dir)
        prepare_directory(handle)

    return handle


def prepare_directory(handle):
    get_out_dir_path(handle).mkdir(parents=True, exist_ok=True)


def get_out_dir_path(handle):
    return handle["out_dir"]


def get_confusion_file_path(handle, name):
    return get_out_dir_path(handle) / csc_bench.const.CONFUSION_FILE_NAME[name]


def get_manifest_file_path(handle):
    return get_out_dir_path(handle) / csc_bench.const.MANIFEST_FILE_NAME


def get_config(handle, section, key):
    return handle["config"][section][key]


def set_progress_bar(handle, desc, total):
    BAR_FORMAT = (
        "{desc:31s}{desc_pad}{percentage:3.0f}% |{bar}| {count:7d} / {total:7d} "
        + "[{elapsed}<{eta}, {rate:8.2f}{unit_pad}{unit}/s]"
    )
    COUNTER_FORMAT = (
        "{desc:30s}{desc_pad}{count:7d} {unit}{unit_pad}[{elapsed}, {rate:8.2f}{unit_pad}{unit}/s]{fill}"
    )

    handle["progress_bar"][desc] = handle["progress_manager"].counter(
        total=total, desc=desc, unit="sent", bar_format=BAR_FORMAT, counter_format=COUNTER_FORMAT
    )


def get_progress_bar(handle, desc):
    return handle["progress_bar"][desc]


def progress_func(handle, desc, total):
    set_progress_bar(handle, desc, total)
    return lambda count: get_progress_bar(handle, desc).update(count)


def set_status(handle, status, is_error=False):
    if is_error:
        color = "bold_bright_white_on_red"
    else:
        color = "bold_bright_white_on_lightslategray"

    if "status" not in handle:
        handle["status"] = handle["progress_manager"].status_bar(
            status_format="CSC{fill}{status}{fill}{elapsed}",
            color=color,
            justify=enlighten.Justify.CENTER,
            status=status,
        )
    else:
        handle["status"].color = color
        handle["status"].update(status=status, force=True)


def finish(handle):
    for progress_bar in handle["progress_bar"].values():
        progress_bar.close()

    handle["progress_manager"].stop()

#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
再現性のための実行マニフェストを作成・検証します．

マニフェストには時刻を含めないので，同じ入力・同じ引数で実行すれば同じ内容になります．

Usage:
  manifest.py -m MANIFEST

Options:
  -m MANIFEST   : 検証するマニフェストファイル．
"""

import logging
import os
import pathlib

import csc_bench.const
import local_lib.serializer


def relative_path(base_dir, path):
    # NOTE: マニフェストの置き場所からの相対パス．base_dir の外なら ".." を含む
    return pathlib.PurePath(os.path.relpath(os.path.abspath(path), os.path.abspath(base_dir))).as_posix()


def describe_output(base_dir, path):
    path = pathlib.Path(path)
    return {
        "path": relative_path(base_dir, path),
        "sha256": local_lib.serializer.sha256_file(path),
        "bytes": path.stat().st_size,
    }


def build(subcommand, argv, master_seed, input_path_list, output_path_list, base_dir, counters, extra=None):
    """
    base_dir はマニフェストを置くディレクトリ．入力と出力のファイルはそこからの相対パスで記録します．
    """
    base_dir = pathlib.Path(base_dir)
    manifest = {
        "tool": csc_bench.const.NAME,
        "tool_version": csc_bench.const.VERSION,
        "subcommand": subcommand,
        "argv": list(argv),
        "master_seed": master_seed,
        "inputs": {
            relative_path(base_dir, path): local_lib.serializer.sha256_file(path)
            for path in sorted(set(map(str, input_path_list)))
        },
        "outputs": sorted(
            (describe_output(base_dir, path) for path in output_path_list), key=lambda output: output["path"]
        ),
        "counters": counters,
    }
    if extra is not None:
        manifest.update(extra)

    return manifest


def store(manifest_path, manifest):
    local_lib.serializer.store_json(manifest_path, manifest)
    logging.info("Write manifest: {path}".format(path=manifest_path))


def manifest_path_for(output_path):
    output_path = pathlib.Path(output_path)
    return output_path.with_name(output_path.name + "." + csc_bench.const.MANIFEST_FILE_NAME)


def verify(manifest_path):
    """記録された入出力のダイジェストと現在のファイルを比べ，食い違いのリストを返します．"""
    manifest_path = pathlib.Path(manifest_path)
    manifest = local_lib.serializer.load_json(manifest_path)

    mismatch_list = []
    for name, digest in manifest["inputs"].items():
        path = manifest_path.parent / name
        if not path.exists():
            mismatch_list.append({"kind": "input", "path": name, "reason": "missing"})
        elif local_lib.serializer.sha256_file(path) != digest:
            mismatch_list.append({"kind": "input", "path": name, "reason": "digest"})

    for output in manifest["outputs"]:
        path = manifest_path.parent / output["path"]
        if not path.exists():
            mismatch_list.append({"kind": "output", "path": output["path"], "reason": "missing"})
        elif local_lib.serializer.sha256_file(path) != output["sha256"]:
            mismatch_list.append({"kind": "output", "path": output["path"], "reason": "digest"})

    for mismatch in mismatch_list:
        logging.warning("{kind} {path}: {reason} mismatch".format(**mismatch))

    return mismatch_list


if __name__ == "__main__":
    from docopt import docopt

    import local_lib.logger

    args = docopt(__doc__)

    local_lib.logger.init("test", level=logging.INFO)

    if len(verify(args["-m"])) == 0:
        logging.info("OK")

#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Nuitka を使って，実行ファイルを生成します．

Usage:
  build.py
"""

import subprocess

import csc

JOBS = 16


def build():
    build_command = (
        "poetry run nuitka3 --follow-imports --include-package=csc_bench --include-package=local_lib "
        "--product-name={name} --file-version={version} --product-version={version} --jobs={jobs} "
        "--assume-yes-for-download --standalone --onefile --output-dir=build "
        "--script-name=app/csc.py "
    ).format(
        jobs=JOBS,
        name=csc.NAME,
        version=csc.VERSION,
    )

    subprocess.call(build_command, shell=True)


if __name__ == "__main__":
    import docopt

    docopt.docopt(__doc__)

    build()

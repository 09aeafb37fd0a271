#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
生成物をファイルにアトミックに書き出します．

Usage:
  serializer.py
"""

import hashlib
import json
import logging
import os
import pathlib
import tempfile

READ_CHUNK_SIZE = 1024 * 1024


def store_bytes(file_path, data):
    logging.debug("Store {file_path}".format(file_path=file_path))

    file_path = pathlib.Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)

    f = tempfile.NamedTemporaryFile(dir=str(file_path.parent), delete=False)
    try:
        f.write(data)
        f.close()
        os.replace(f.name, file_path)
    except:
        f.close()
        pathlib.Path(f.name).unlink(missing_ok=True)
        raise


def store_text(file_path, text):
    store_bytes(file_path, text.encode("utf-8"))


def dump_json(data):
    return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def store_json(file_path, data):
    store_text(file_path, dump_json(data))


def load_bytes(file_path):
    logging.debug("Load {file_path}".format(file_path=file_path))

    with open(file_path, "rb") as f:
        return f.read()


def load_text(file_path):
    return load_bytes(file_path).decode("utf-8")


def load_json(file_path):
    return json.loads(load_text(file_path))


def sha256_bytes(data):
    return hashlib.sha256(data).hexdigest()


def sha256_file(file_path):
    h = hashlib.sha256()
    with open(file_path, "rb") as f:
        for chunk in iter(lambda: f.read(READ_CHUNK_SIZE), b""):
            h.update(chunk)
    return h.hexdigest()


if __name__ == "__main__":
    import logger
    from docopt import docopt

    args = docopt(__doc__)

    logger.init("test", level=logging.INFO)

    data = {"a": 1.0, "文": "字"}

    with tempfile.TemporaryDirectory() as tmp_dir:
        file_path = pathlib.Path(tmp_dir) / "data.json"
        store_json(file_path, data)

        assert load_json(file_path) == data
        assert sha256_file(file_path) == sha256_bytes(load_bytes(file_path))

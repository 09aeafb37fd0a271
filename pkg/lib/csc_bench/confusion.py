#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
混淆集合 (confusion set) の読み込み・結合・絞り込み・集計・分割を行います．

Usage:
  confusion.py -i CONFUSION [-s SEED]

Options:
  -i CONFUSION  : 混淆集合の TSV ファイル．
  -s SEED       : 分割に使うシード．[default: 0]
"""

import dataclasses
import enum
import logging
import math
import typing

import csc_bench.const
import csc_bench.rng
from csc_bench.exceptions import ConfusionParseError, InvariantError, SeenPairError, SplitError

# NOTE: 0.13 * 100 = 13.000000000000002 のような誤差で件数がずれないようにする
ROUND_EPS = 1e-9


class Tag(enum.IntFlag):
    PHONETIC = 1
    GRAPHIC = 2
    BOTH = 3

    @property
    def label(self):
        return TAG_TO_LABEL[self]

    @classmethod
    def from_label(cls, label):
        return LABEL_TO_TAG[label]


LABEL_TO_TAG = {
    csc_bench.const.TAG_LABEL_PHONETIC: Tag.PHONETIC,
    csc_bench.const.TAG_LABEL_GRAPHIC: Tag.GRAPHIC,
    csc_bench.const.TAG_LABEL_BOTH: Tag.BOTH,
}
TAG_TO_LABEL = {tag: label for label, tag in LABEL_TO_TAG.items()}


def is_scalar_char(text):
    return (type(text) is str) and (len(text) == 1) and not (0xD800 <= ord(text) <= 0xDFFF)


@dataclasses.dataclass(frozen=True)
class MisspellingPair:
    key: str
    value: str
    tag: Tag = Tag.BOTH

    def __post_init__(self):
        if not is_scalar_char(self.key):
            raise InvariantError("key must be a single character: {key!r}".format(key=self.key))
        if not is_scalar_char(self.value):
            raise InvariantError("value must be a single character: {value!r}".format(value=self.value))
        if self.key == self.value:
            raise InvariantError("key and value are identical: {key}".format(key=self.key))
        if not isinstance(self.tag, Tag):
            raise InvariantError("unknown tag: {tag!r}".format(tag=self.tag))


class ConfusionStats(typing.NamedTuple):
    num_keys: int
    num_pairs: int


class ConfusionSet:
    """
    正解文字 k から，誤りやすい候補 (value, tag) の列への写像．

    値の順序はファイル上の出現順 (重複除去後) を保ちます．構築後は変更しません．
    """

    def __init__(self, entries=None):
        self._entries = {}
        for key, value_list in (entries or {}).items():
            value_list = tuple((value, Tag(tag)) for value, tag in value_list)
            if len(value_list) == 0:
                raise InvariantError("empty entry list for key {key}".format(key=key))
            if len({value for value, _ in value_list}) != len(value_list):
                raise InvariantError("duplicate values for key {key}".format(key=key))
            for value, tag in value_list:
                MisspellingPair(key, value, tag)
            self._entries[key] = value_list

    def __len__(self):
        return len(self._entries)

    def __contains__(self, key):
        return key in self._entries

    def __getitem__(self, key):
        return tuple(value for value, _ in self._entries[key])

    def __eq__(self, other):
        if not isinstance(other, ConfusionSet):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self):
        return "ConfusionSet(keys={keys}, pairs={pairs})".format(keys=len(self), pairs=self.num_pairs)

    def get(self, key, default=()):
        if key not in self._entries:
            return default
        return self[key]

    def keys(self):
        return tuple(self._entries.keys())

    def items(self):
        return self._entries.items()

    def tag(self, key, value):
        for v, tag in self._entries.get(key, ()):
            if v == value:
                return tag
        return None

    def pairs(self):
        for key, value_list in self._entries.items():
            for value, tag in value_list:
                yield MisspellingPair(key, value, tag)

    def pair_set(self):
        return frozenset((pair.key, pair.value) for pair in self.pairs())

    @property
    def num_pairs(self):
        return sum(len(value_list) for value_list in self._entries.values())

    def is_empty(self):
        return len(self._entries) == 0


def build(pair_list):
    """
    ペアの列から混淆集合を作ります．同じ (key, value) はタグを合成して 1 つにまとめます．

    戻り値は (混淆集合, 重複数)．
    """
    entries = {}
    num_duplicate = 0
    for pair in pair_list:
        value_map = entries.setdefault(pair.key, {})
        if pair.value in value_map:
            num_duplicate += 1
            value_map[pair.value] |= pair.tag
        else:
            value_map[pair.value] = pair.tag

    return (
        ConfusionSet({key: list(value_map.items()) for key, value_map in entries.items()}),
        num_duplicate,
    )


def parse_line(line_no, line):
    field_list = line.split("\t")
    if len(field_list) != 3:
        raise ConfusionParseError(line_no, "expected 3 fields, got {count}".format(count=len(field_list)))

    key, value, label = field_list
    if not is_scalar_char(key):
        raise ConfusionParseError(line_no, "key is not a single character: {key!r}".format(key=key))
    if not is_scalar_char(value):
        raise ConfusionParseError(line_no, "value is not a single character: {value!r}".format(value=value))
    if key == value:
        raise ConfusionParseError(line_no, "key equals value: {key}".format(key=key))
    if label not in LABEL_TO_TAG:
        raise ConfusionParseError(line_no, "unknown tag: {label!r}".format(label=label))

    return MisspellingPair(key, value, Tag.from_label(label))


def parse_confusion(text):
    pair_list = []
    for line_no, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        if (line.strip() == "") or line.startswith(csc_bench.const.COMMENT_PREFIX):
            continue
        pair_list.append(parse_line(line_no, line))

    confusion, num_duplicate = build(pair_list)

    if num_duplicate != 0:
        logging.warning("Merged {count:,} duplicate confusion pairs".format(count=num_duplicate))

    return (confusion, num_duplicate)


def load_confusion(data):
    """data は UTF-8 のバイト列．"""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ConfusionParseError(data.count(b"\n", 0, e.start) + 1, "invalid UTF-8")

    return parse_confusion(text)


def dump_confusion(confusion):
    return "".join(
        "{key}\t{value}\t{label}\n".format(key=pair.key, value=pair.value, label=pair.tag.label)
        for pair in confusion.pairs()
    )


def merge(a, b):
    confusion, num_duplicate = build(list(a.pairs()) + list(b.pairs()))
    logging.debug("Merge confusion sets ({count:,} shared pairs)".format(count=num_duplicate))

    return confusion


def filter_by_tag(confusion, want):
    if want not in (Tag.PHONETIC, Tag.GRAPHIC):
        raise ValueError("filter tag must be phonetic or graphic: {want!r}".format(want=want))

    return build(pair for pair in confusion.pairs() if pair.tag & want)[0]


def stats(confusion):
    return ConfusionStats(len(confusion), confusion.num_pairs)


@dataclasses.dataclass(frozen=True)
class SplitSpec:
    seed: int
    key_holdout_frac: float = csc_bench.const.KEY_HOLDOUT_FRAC
    value_key_frac: float = csc_bench.const.VALUE_KEY_FRAC
    value_holdout_frac: float = csc_bench.const.VALUE_HOLDOUT_FRAC
    min_train_values: int = csc_bench.const.MIN_TRAIN_VALUES

    def __post_init__(self):
        try:
            csc_bench.rng.check_seed(self.seed)
        except ValueError as e:
            raise SplitError(str(e))

        if not (0.0 <= self.key_holdout_frac <= 1.0):
            raise SplitError("key_holdout_frac out of [0, 1]: {v}".format(v=self.key_holdout_frac))
        if not (0.0 <= self.value_key_frac <= 1.0):
            raise SplitError("value_key_frac out of [0, 1]: {v}".format(v=self.value_key_frac))
        if not (0.0 < self.value_holdout_frac < 1.0):
            raise SplitError("value_holdout_frac out of (0, 1): {v}".format(v=self.value_holdout_frac))
        if (type(self.min_train_values) is not int) or (self.min_train_values < 1):
            raise SplitError("min_train_values must be >= 1: {v}".format(v=self.min_train_values))


@dataclasses.dataclass(frozen=True)
class SplitResult:
    s_train: ConfusionSet
    s_unseen_k: ConfusionSet
    s_unseen_v: ConfusionSet

    def verify(self, source):
        train_keys = set(self.s_train.keys())

        shared = train_keys & set(self.s_unseen_k.keys())
        if len(shared) != 0:
            raise InvariantError("unseen-key set shares keys with train: {keys}".format(keys=sorted(shared)))

        for key in self.s_unseen_v.keys():
            shared = set(self.s_unseen_v[key]) & set(self.s_train.get(key))
            if len(shared) != 0:
                raise InvariantError(
                    "unseen-value set shares values with train for {key}: {values}".format(
                        key=key, values=sorted(shared)
                    )
                )

        part_list = [self.s_train, self.s_unseen_k, self.s_unseen_v]
        if sum(part.num_pairs for part in part_list) != source.num_pairs:
            raise InvariantError("split does not partition the pair set")
        if frozenset().union(*(part.pair_set() for part in part_list)) != source.pair_set():
            raise InvariantError("split does not cover the pair set")


def count_floor(x):
    return math.floor(x + ROUND_EPS)


def count_ceil(x):
    return math.ceil(x - ROUND_EPS)


def sample_index(rng, population, size):
    if size == 0:
        return []
    return sorted(int(i) for i in rng.choice(population, size=size, replace=False))


def split(confusion, spec):
    if confusion.is_empty():
        raise SplitError("cannot split an empty confusion set")

    rng = csc_bench.rng.generator(spec.seed)

    # NOTE: 辞書の順序に依存しないよう，コードポイント順に並べてから抽出する
    key_list = sorted(confusion.keys())

    num_key_holdout = count_floor(spec.key_holdout_frac * len(key_list))
    holdout_key = {key_list[i] for i in sample_index(rng, len(key_list), num_key_holdout)}

    remain_list = [key for key in key_list if key not in holdout_key]
    eligible_list = [key for key in remain_list if len(confusion[key]) >= spec.min_train_values + 1]

    num_value_key = count_floor(spec.value_key_frac * len(eligible_list))
    holdout_value = {}
    for i in sample_index(rng, len(eligible_list), num_value_key):
        key = eligible_list[i]
        value_list = sorted(confusion[key])
        count = min(
            count_ceil(spec.value_holdout_frac * len(value_list)),
            len(value_list) - spec.min_train_values,
        )
        holdout_value[key] = {value_list[j] for j in sample_index(rng, len(value_list), count)}

    train_pair, unseen_k_pair, unseen_v_pair = [], [], []
    for pair in confusion.pairs():
        if pair.key in holdout_key:
            unseen_k_pair.append(pair)
        elif pair.value in holdout_value.get(pair.key, ()):
            unseen_v_pair.append(pair)
        else:
            train_pair.append(pair)

    result = SplitResult(build(train_pair)[0], build(unseen_k_pair)[0], build(unseen_v_pair)[0])

    logging.info(
        "Split {keys:,} keys: unseen-key {k:,} keys, unseen-value {v:,} keys, train {t:,} keys".format(
            keys=len(confusion), k=len(result.s_unseen_k), v=len(result.s_unseen_v), t=len(result.s_train)
        )
    )

    return result


def extract_seen_pairs(dataset, n, seed, source=None):
    """
    データセット中で実際に生じた (正解, 誤り) のペアから n 個を非復元抽出します．

    タグは source が与えられればそこから写し，無ければ both とします．
    """
    if n < 0:
        raise SeenPairError("sample size must be non-negative: {n}".format(n=n))

    realized = sorted({(error.correct, error.wrong) for sentence in dataset for error in sentence.errors})
    if len(realized) == 0:
        raise SeenPairError("no observed pairs")

    rng = csc_bench.rng.generator(seed)
    pair_list = []
    for i in sample_index(rng, len(realized), min(n, len(realized))):
        key, value = realized[i]
        tag = None if source is None else source.tag(key, value)
        pair_list.append(MisspellingPair(key, value, Tag.BOTH if tag is None else tag))

    return build(pair_list)[0]


if __name__ == "__main__":
    from docopt import docopt

    import local_lib.logger
    import local_lib.serializer

    args = docopt(__doc__)

    local_lib.logger.init("test", level=logging.INFO)

    confusion, _ = load_confusion(local_lib.serializer.load_bytes(args["-i"]))
    logging.info("S: {stats}".format(stats=stats(confusion)))
    logging.info("S_p: {stats}".format(stats=stats(filter_by_tag(confusion, Tag.PHONETIC))))
    logging.info("S_g: {stats}".format(stats=stats(filter_by_tag(confusion, Tag.GRAPHIC))))

    result = split(confusion, SplitSpec(seed=int(args["-s"])))
    result.verify(confusion)

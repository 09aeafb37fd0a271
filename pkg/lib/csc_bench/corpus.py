#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
きれいなコーパスを読み込んで分割し，混淆集合に従って誤字を混入させた並列データを作ります．

Usage:
  corpus.py -i CORPUS -C CONFUSION [-p PE] [-s SEED]

Options:
  -i CORPUS     : 1 行 1 文のコーパス．
  -C CONFUSION  : 混淆集合の TSV ファイル．
  -p PE         : 置換確率．[default: 0.05]
  -s SEED       : マスターシード．[default: 0]
"""

import dataclasses
import logging
import typing

import csc_bench.confusion
import csc_bench.const
import csc_bench.parallel
import csc_bench.rng
from csc_bench.exceptions import CorpusError, DatasetFormatError, InvariantError, ScontextError, SuiteError

LINE_BREAK_CHARS = frozenset("\n\r\x0b\x0c\x1c\x1d\x1e\x85\u2028\u2029")
ID_WIDTH = 8


def has_line_break(text):
    return any(c in LINE_BREAK_CHARS for c in text)


@dataclasses.dataclass(frozen=True)
class CleanSentence:
    id: str
    text: str

    def __post_init__(self):
        if len(self.text) == 0:
            raise InvariantError("empty sentence: {id}".format(id=self.id))
        if has_line_break(self.text):
            raise InvariantError("line break inside sentence: {id}".format(id=self.id))


class SpellingError(typing.NamedTuple):
    position: int
    wrong: str
    correct: str


def diff_error(source, target):
    return tuple(
        SpellingError(i, wrong, correct) for i, (wrong, correct) in enumerate(zip(source, target)) if wrong != correct
    )


@dataclasses.dataclass(frozen=True)
class ParallelSentence:
    id: str
    source: str
    target: str
    errors: tuple = ()

    def __post_init__(self):
        if len(self.source) != len(self.target):
            raise InvariantError(
                "source and target differ in length: {id} ({s} != {t})".format(
                    id=self.id, s=len(self.source), t=len(self.target)
                )
            )
        if tuple(self.errors) != diff_error(self.source, self.target):
            raise InvariantError("error annotation does not match source/target diff: {id}".format(id=self.id))

    @classmethod
    def from_pair(cls, sentence_id, source, target):
        return cls(sentence_id, source, target, diff_error(source, target))


@dataclasses.dataclass(frozen=True)
class CorruptionConfig:
    p_e: float
    master_seed: int

    def __post_init__(self):
        if not (0.0 <= self.p_e <= 1.0):
            raise InvariantError("p_e out of [0, 1]: {p_e}".format(p_e=self.p_e))
        csc_bench.rng.check_seed(self.master_seed)


@dataclasses.dataclass(frozen=True)
class SuiteConfig:
    seed: int
    p_e: float = csc_bench.const.P_E
    p_e_unseen_k: float = csc_bench.const.P_E_UNSEEN_K
    probs: tuple = tuple(csc_bench.const.PROBS_PE_LIST)
    seen_size: int = csc_bench.const.SEEN_SIZE
    scontext_size: int = csc_bench.const.SCONTEXT_SIZE

    def __post_init__(self):
        for name in ["seen_size", "scontext_size"]:
            value = getattr(self, name)
            if value < 1:
                raise SuiteError("{name} must be positive: {value}".format(name=name, value=value))
        for p_e in [self.p_e, self.p_e_unseen_k, *self.probs]:
            if not (0.0 <= p_e <= 1.0):
                raise SuiteError("p_e out of [0, 1]: {p_e}".format(p_e=p_e))


@dataclasses.dataclass
class Suite:
    datasets: dict
    s_seen: csc_bench.confusion.ConfusionSet
    manifest: dict


def load_corpus(data, min_len=1, max_len=512):
    """
    data は UTF-8 のバイト列．戻り値は (文のリスト, 除外した行数の内訳)．

    文の ID は元ファイルでの行番号 (1 始まり) をゼロ埋めしたものです．
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise CorpusError("invalid UTF-8", offset=e.start)

    if text.startswith("\ufeff"):
        text = text[1:]

    line_list = text.split("\n")
    if line_list[-1] == "":
        line_list.pop()

    id_width = max(ID_WIDTH, len(str(len(line_list))))
    drop_stat = {"empty": 0, "short": 0, "long": 0, "invalid": 0}
    sentence_list = []
    for line_no, line in enumerate(line_list, start=1):
        line = line.strip()
        if line == "":
            drop_stat["empty"] += 1
        elif has_line_break(line) or ("\t" in line):
            drop_stat["invalid"] += 1
        elif len(line) < min_len:
            drop_stat["short"] += 1
        elif len(line) > max_len:
            drop_stat["long"] += 1
        else:
            sentence_list.append(CleanSentence(str(line_no).zfill(id_width), line))

    logging.info(
        "Load {count:,} sentences (dropped: empty {empty:,}, short {short:,}, long {long:,}, invalid {invalid:,})".format(
            count=len(sentence_list), **drop_stat
        )
    )

    return (sentence_list, drop_stat)


def partition_corpus(sentence_list, n_valid, n_test, seed):
    if (n_valid < 1) or (n_test < 1):
        raise CorpusError(
            "validation and test pools must not be empty: n_valid={n_valid}, n_test={n_test}".format(
                n_valid=n_valid, n_test=n_test
            )
        )
    if n_valid + n_test >= len(sentence_list):
        raise CorpusError(
            "pools are oversubscribed: {n_valid} + {n_test} sentences requested from {total}".format(
                n_valid=n_valid, n_test=n_test, total=len(sentence_list)
            )
        )

    perm = [int(i) for i in csc_bench.rng.generator(seed).permutation(len(sentence_list))]

    # NOTE: 各プールの中は元の順序に戻しておく
    valid_index = sorted(perm[:n_valid])
    test_index = sorted(perm[n_valid : n_valid + n_test])
    train_index = sorted(perm[n_valid + n_test :])

    return tuple([sentence_list[i] for i in index] for index in (train_index, valid_index, test_index))


def corrupt_sentence(sentence, confusion, cfg):
    rng = csc_bench.rng.substream(cfg.master_seed, sentence.id)

    char_list = list(sentence.text)
    eligible = [i for i, c in enumerate(char_list) if c in confusion]

    if len(eligible) != 0:
        trial = rng.random(len(eligible))
        for i, u in zip(eligible, trial):
            if u < cfg.p_e:
                candidate = confusion[char_list[i]]
                char_list[i] = candidate[int(rng.integers(len(candidate)))]

    return ParallelSentence.from_pair(sentence.id, "".join(char_list), sentence.text)


def build_dataset(pool, confusion, cfg, jobs=1, progress=None):
    return csc_bench.parallel.map_ordered(corrupt_sentence, pool, (confusion, cfg), jobs, progress)


def sample_sentences(dataset, n, seed):
    index = csc_bench.confusion.sample_index(csc_bench.rng.generator(seed), len(dataset), min(n, len(dataset)))
    return [dataset[i] for i in index]


def rewrite_context(sentence, confusion, seed):
    rng = csc_bench.rng.substream(seed, sentence.id)

    char_list = list(sentence.source)
    num_kept = 0
    for error in sentence.errors:
        if error.correct not in confusion:
            raise ScontextError(
                "target character {char} of {id} is not a key of the confusion set".format(
                    char=error.correct, id=sentence.id
                )
            )
        candidate = confusion[error.correct]
        if len(candidate) >= 2:
            alternative = [value for value in candidate if value != error.wrong]
            char_list[error.position] = alternative[int(rng.integers(len(alternative)))]
        else:
            num_kept += 1

    return (ParallelSentence.from_pair(sentence.id, "".join(char_list), sentence.target), num_kept)


def build_scontext(trainset_sample, confusion, seed):
    """
    訓練データの各誤字 v_ij を，同じ正解 k_i の別の候補 v_ik に置き換えます．

    候補が 1 つしか無い場合は元の誤字のまま残し，その数を数えます．戻り値は (データセット, 残した数)．
    """
    dataset = []
    num_kept = 0
    for sentence in trainset_sample:
        rewritten, kept = rewrite_context(sentence, confusion, seed)
        dataset.append(rewritten)
        num_kept += kept

    if num_kept != 0:
        logging.info("Kept {count:,} wrong characters whose target has a single candidate".format(count=num_kept))

    return (dataset, num_kept)


def count_error(dataset):
    return sum(len(sentence.errors) for sentence in dataset)


def dump_dataset(dataset):
    return "".join(
        "{id}\t{source}\t{target}\n".format(id=sentence.id, source=sentence.source, target=sentence.target)
        for sentence in dataset
    )


def parse_dataset(text):
    dataset = []
    id_set = set()
    for line_no, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        if line == "" or line.startswith(csc_bench.const.COMMENT_PREFIX):
            continue
        field_list = line.split("\t")
        if len(field_list) != 3:
            raise DatasetFormatError(line_no, "expected 3 fields, got {count}".format(count=len(field_list)))

        sentence_id, source, target = field_list
        if sentence_id in id_set:
            raise DatasetFormatError(line_no, "duplicate id: {id}".format(id=sentence_id))
        if len(source) != len(target):
            raise DatasetFormatError(line_no, "source and target differ in length: {id}".format(id=sentence_id))

        id_set.add(sentence_id)
        dataset.append(ParallelSentence.from_pair(sentence_id, source, target))

    return dataset


def load_dataset(data):
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise DatasetFormatError(data.count(b"\n", 0, e.start) + 1, "invalid UTF-8")

    return parse_dataset(text)


def check_pool(pools):
    name_list = ["train", "valid", "test"]
    id_owner = {}
    for name, pool in zip(name_list, pools):
        if len(pool) == 0:
            raise SuiteError("{name} pool is empty".format(name=name))
        for sentence in pool:
            if sentence.id in id_owner:
                raise SuiteError(
                    "sentence {id} is in both {a} and {b} pools".format(
                        id=sentence.id, a=id_owner[sentence.id], b=name
                    )
                )
            id_owner[sentence.id] = name


def dataset_seed(seed, *labels):
    return csc_bench.rng.derive_seed(seed, "dataset", *labels)


def build_suite(pools, splits, s_full, s_p, s_g, s_seen, config, jobs=1, progress=None, set_status=None):
    """
    訓練・検証データと 9 種類のテストデータを作ります．

    pools は (train, valid, test)．s_seen が None の場合は Trainset で実際に生じたペアから抽出します．
    progress は処理した文数を，set_status は状況を表す文字列を受け取ります．
    """
    check_pool(pools)
    train_pool, valid_pool, test_pool = pools

    required = {
        "S": s_full,
        "S_p": s_p,
        "S_g": s_g,
        "S_train": splits.s_train,
        "S_unseen_k": splits.s_unseen_k,
        "S_unseen_v": splits.s_unseen_v,
    }
    if s_seen is not None:
        required["S_seen"] = s_seen
    for name, confusion in required.items():
        if confusion.is_empty():
            raise SuiteError("confusion set {name} is empty".format(name=name))

    datasets = {}
    dataset_manifest = {}

    def synthesize(name, pool, confusion_name, confusion, p_e, file_name, label=()):
        if set_status is not None:
            set_status("{name} を作成しています...".format(name=name))
        seed = dataset_seed(config.seed, *(label or (name,)))
        dataset = build_dataset(pool, confusion, CorruptionConfig(p_e, seed), jobs, progress)
        datasets[name] = dataset
        dataset_manifest[name] = {
            "file": file_name,
            "confusion": confusion_name,
            "p_e": p_e,
            "seed": seed,
            "num_sentences": len(dataset),
            "num_errors": count_error(dataset),
        }
        logging.info(
            "{name}: {count:,} sentences, {error:,} errors (p_e={p_e})".format(
                name=name, count=len(dataset), error=count_error(dataset), p_e=p_e
            )
        )

    file_name = csc_bench.const.DATASET_FILE_NAME

    synthesize(
        csc_bench.const.DATASET_TRAIN,
        train_pool,
        "S_train",
        splits.s_train,
        config.p_e,
        file_name[csc_bench.const.DATASET_TRAIN],
    )
    synthesize(
        csc_bench.const.DATASET_VALID,
        valid_pool,
        "S_train",
        splits.s_train,
        config.p_e,
        file_name[csc_bench.const.DATASET_VALID],
    )

    if s_seen is None:
        s_seen = csc_bench.confusion.extract_seen_pairs(
            datasets[csc_bench.const.DATASET_TRAIN],
            config.seen_size,
            dataset_seed(config.seed, "S_seen"),
            s_full,
        )
    if s_seen.is_empty():
        raise SuiteError("confusion set S_seen is empty")

    for name, confusion_name, confusion, p_e in [
        (csc_bench.const.DATASET_REGULAR, "S", s_full, config.p_e),
        (csc_bench.const.DATASET_PHONETICS, "S_p", s_p, config.p_e),
        (csc_bench.const.DATASET_GRAPHICS, "S_g", s_g, config.p_e),
        (csc_bench.const.DATASET_SERROR, "S_seen", s_seen, config.p_e),
        (csc_bench.const.DATASET_UNSEEN_K, "S_unseen_k", splits.s_unseen_k, config.p_e_unseen_k),
        (csc_bench.const.DATASET_UNSEEN_V, "S_unseen_v", splits.s_unseen_v, config.p_e),
    ]:
        synthesize(name, test_pool, confusion_name, confusion, p_e, file_name[name])

    for p_e in sorted(config.probs):
        name = csc_bench.const.PROBS_DATASET_NAME.format(p_e=p_e)
        synthesize(
            name,
            test_pool,
            "S",
            s_full,
            p_e,
            csc_bench.const.PROBS_FILE_NAME.format(p_e=p_e),
            label=(csc_bench.const.DATASET_PROBS, repr(float(p_e))),
        )

    if set_status is not None:
        set_status("{name} を作成しています...".format(name=csc_bench.const.DATASET_SCONTEXT))
    scontext_seed = dataset_seed(config.seed, csc_bench.const.DATASET_SCONTEXT)
    sample = sample_sentences(datasets[csc_bench.const.DATASET_TRAIN], config.scontext_size, scontext_seed)
    scontext, num_kept = build_scontext(sample, s_full, scontext_seed)
    datasets[csc_bench.const.DATASET_SCONTEXT] = scontext
    dataset_manifest[csc_bench.const.DATASET_SCONTEXT] = {
        "file": file_name[csc_bench.const.DATASET_SCONTEXT],
        "confusion": "S",
        "p_e": None,
        "seed": scontext_seed,
        "num_sentences": len(scontext),
        "num_errors": count_error(scontext),
        "singleton_kept": num_kept,
    }

    correct = [ParallelSentence.from_pair(sentence.id, sentence.text, sentence.text) for sentence in test_pool]
    datasets[csc_bench.const.DATASET_CORRECT] = correct
    dataset_manifest[csc_bench.const.DATASET_CORRECT] = {
        "file": file_name[csc_bench.const.DATASET_CORRECT],
        "confusion": None,
        "p_e": 0.0,
        "seed": None,
        "num_sentences": len(correct),
        "num_errors": 0,
    }

    manifest = {
        "datasets": dataset_manifest,
        "confusion_sets": {
            name: dict(csc_bench.confusion.stats(confusion)._asdict())
            for name, confusion in list(required.items()) + [("S_seen", s_seen)]
        },
        # NOTE: P_e^UnseenK × N_Sk ≈ P_e^UnseenV × N_Sv となるように UnseenK の置換確率を決めている
        "unseen_rate_calibration": {
            "unseen_k": config.p_e_unseen_k * len(splits.s_unseen_k),
            "unseen_v": config.p_e * len(splits.s_unseen_v),
        },
        "eligibility": "Bernoulli trial per character that is a key of the confusion set",
        "substream": "sha256(le64(master_seed) + utf8(label)) first 8 bytes, little endian",
    }

    return Suite(datasets, s_seen, manifest)


if __name__ == "__main__":
    from docopt import docopt

    import local_lib.logger
    import local_lib.serializer

    args = docopt(__doc__)

    local_lib.logger.init("test", level=logging.INFO)

    confusion, _ = csc_bench.confusion.load_confusion(local_lib.serializer.load_bytes(args["-C"]))
    sentence_list, _ = load_corpus(local_lib.serializer.load_bytes(args["-i"]))

    dataset = build_dataset(sentence_list, confusion, CorruptionConfig(float(args["-p"]), int(args["-s"])))
    print(dump_dataset(dataset), end="")

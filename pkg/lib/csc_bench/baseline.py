#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
文字 n-gram 言語モデルと混淆集合による雑音のある通信路モデルで誤字を訂正します．

外部モデル無しでパイプライン全体を動かすためのベースラインです．

Usage:
  baseline.py -t TRAIN -C CONFUSION -i INPUT [-n ORDER]

Options:
  -t TRAIN      : 言語モデルの学習に使うデータセット (target 側を使用)．
  -C CONFUSION  : 混淆集合の TSV ファイル．
  -i INPUT      : 訂正するデータセット．
  -n ORDER      : n-gram の次数．[default: 3]
"""

import collections
import dataclasses
import logging
import math

import csc_bench.const
import csc_bench.parallel
import csc_bench.rng
import local_lib.serializer
from csc_bench.exceptions import LanguageModelError

BOS = csc_bench.const.LM_BOS
EOS = csc_bench.const.LM_EOS
UNK = csc_bench.const.LM_UNK

LM_MAGIC = "csc-bench ngram-lm"


class NGramLM:
    def __init__(self, order, add_k, counts):
        self.order = order
        self.add_k = add_k
        self.counts = {context: collections.Counter(next_count) for context, next_count in counts.items()}
        self.context_total = {context: sum(next_count.values()) for context, next_count in self.counts.items()}

        vocab = {UNK, EOS}
        for next_count in self.counts.values():
            vocab.update(next_count.keys())
        self.vocab = frozenset(vocab)

    @property
    def vocab_size(self):
        return len(self.vocab)

    def map_symbol(self, symbol):
        if (symbol == BOS) or (symbol in self.vocab):
            return symbol
        return UNK

    def normalize_context(self, context):
        if self.order == 1:
            return ()
        context = [BOS] * (self.order - 1) + list(context)
        return tuple(self.map_symbol(symbol) for symbol in context[-(self.order - 1) :])

    def logprob(self, context, next_symbol):
        context = self.normalize_context(context)
        next_symbol = self.map_symbol(next_symbol)

        count = self.counts[context][next_symbol] if context in self.counts else 0
        total = self.context_total.get(context, 0)

        return math.log((count + self.add_k) / (total + self.add_k * self.vocab_size))

    def sentence_logprob(self, text):
        padded = [BOS] * (self.order - 1) + list(text) + [EOS]
        return sum(
            self.logprob(padded[i - self.order + 1 : i], padded[i]) for i in range(self.order - 1, len(padded))
        )

    def perplexity(self, text_list):
        total_logprob = 0.0
        total_symbol = 0
        for text in text_list:
            total_logprob += self.sentence_logprob(text)
            total_symbol += len(text) + 1

        return math.exp(-total_logprob / total_symbol)


def train_lm(corpus, order=csc_bench.const.LM_ORDER, add_k=csc_bench.const.LM_ADD_K):
    if (type(order) is not int) or (order < 1):
        raise LanguageModelError("order must be >= 1: {order}".format(order=order))
    if not (add_k > 0):
        raise LanguageModelError("add_k must be positive: {add_k}".format(add_k=add_k))

    counts = collections.defaultdict(collections.Counter)
    num_text = 0
    for text in corpus:
        num_text += 1
        padded = [BOS] * (order - 1) + list(text) + [EOS]
        for i in range(order - 1, len(padded)):
            counts[tuple(padded[i - order + 1 : i])][padded[i]] += 1

    if num_text == 0:
        raise LanguageModelError("cannot train a language model on an empty corpus")

    lm = NGramLM(order, add_k, counts)

    logging.info(
        "Train {order}-gram LM on {count:,} sentences: {context:,} contexts, vocabulary {vocab:,}".format(
            order=order, count=num_text, context=len(lm.counts), vocab=lm.vocab_size
        )
    )

    return lm


def lm_logprob(lm, context, next_symbol):
    return lm.logprob(context, next_symbol)


def dump_lm(lm):
    line_list = [
        "# {magic}\n".format(magic=LM_MAGIC),
        "# order={order}\n".format(order=lm.order),
        "# add_k={add_k!r}\n".format(add_k=lm.add_k),
        "# vocab_size={vocab_size}\n".format(vocab_size=lm.vocab_size),
    ]
    for context in sorted(lm.counts.keys()):
        for next_symbol in sorted(lm.counts[context].keys()):
            line_list.append(
                "\t".join(list(context) + [next_symbol, str(lm.counts[context][next_symbol])]) + "\n"
            )

    body = "".join(line_list)
    digest = local_lib.serializer.sha256_bytes(body.encode("utf-8"))

    return body + "# sha256={digest}\n".format(digest=digest)


def parse_header(line, name):
    prefix = "# {name}=".format(name=name)
    if not line.startswith(prefix):
        raise LanguageModelError("missing header field: {name}".format(name=name))
    return line[len(prefix) :]


def load_lm(text):
    line_list = text.split("\n")
    if line_list[-1] == "":
        line_list.pop()
    if (len(line_list) < 5) or (line_list[0] != "# {magic}".format(magic=LM_MAGIC)):
        raise LanguageModelError("not a language model file")

    body = "".join(line + "\n" for line in line_list[:-1])
    digest = parse_header(line_list[-1], "sha256")
    if local_lib.serializer.sha256_bytes(body.encode("utf-8")) != digest:
        raise LanguageModelError("checksum mismatch")

    order = int(parse_header(line_list[1], "order"))
    add_k = float(parse_header(line_list[2], "add_k"))
    vocab_size = int(parse_header(line_list[3], "vocab_size"))

    counts = collections.defaultdict(collections.Counter)
    for line in line_list[4:-1]:
        field_list = line.split("\t")
        if len(field_list) != order + 1:
            raise LanguageModelError("malformed count line: {line!r}".format(line=line))
        counts[tuple(field_list[: order - 1])][field_list[order - 1]] = int(field_list[order])

    lm = NGramLM(order, add_k, counts)
    if lm.vocab_size != vocab_size:
        raise LanguageModelError(
            "vocabulary size mismatch: header {header}, counts {actual}".format(
                header=vocab_size, actual=lm.vocab_size
            )
        )

    return lm


def build_inverse_index(confusion):
    inverse = collections.defaultdict(set)
    for pair in confusion.pairs():
        inverse[pair.value].add(pair.key)

    return {observed: frozenset(key_set) for observed, key_set in inverse.items()}


@dataclasses.dataclass(frozen=True)
class ChannelModel:
    p_err: float
    confusion: object
    inverse: dict

    def logprob(self, observed, intended):
        if observed == intended:
            return math.log(1.0 - self.p_err)
        return math.log(self.p_err / len(self.confusion[intended]))


def build_channel(confusion, p_err=csc_bench.const.CHANNEL_P_ERR):
    if not (0.0 < p_err < 1.0):
        raise LanguageModelError("p_err must be in (0, 1): {p_err}".format(p_err=p_err))

    return ChannelModel(p_err, confusion, build_inverse_index(confusion))


def window_logprob(lm, decoded, candidate, source, i):
    """位置 i を含む n-gram (最大 order 個) の対数確率の和．左は訂正済み，右は入力のままの文字を使う．"""
    order = lm.order
    if order == 1:
        left = []
    else:
        left = ([BOS] * (order - 1) + decoded[max(0, i - order + 1) :])[-(order - 1) :]

    right = list(source[i + 1 : i + order])
    if len(right) < order - 1:
        right.append(EOS)

    window = left + [candidate] + right

    return sum(lm.logprob(window[j - order + 1 : j], window[j]) for j in range(len(left), len(window)))


def correct_sentence(source, lm, channel, lam=csc_bench.const.LM_LAMBDA):
    decoded = []
    for i, observed in enumerate(source):
        key_set = channel.inverse.get(observed)
        if not key_set:
            decoded.append(observed)
            continue

        # NOTE: 同点の場合は入力文字，次にコードポイント順を優先する
        candidate_list = [observed] + sorted(key_set - {observed})

        best, best_score = None, None
        for candidate in candidate_list:
            score = channel.logprob(observed, candidate) + lam * window_logprob(lm, decoded, candidate, source, i)
            if (best_score is None) or (score > best_score):
                best, best_score = candidate, score

        decoded.append(best)

    return "".join(decoded)


def correct_item(sentence, lm, channel, lam):
    return correct_sentence(sentence.source, lm, channel, lam)


def identity_corrector(dataset):
    return [sentence.source for sentence in dataset]


def oracle_corrector(dataset):
    return [sentence.target for sentence in dataset]


def random_candidate_item(sentence, inverse, seed):
    rng = csc_bench.rng.substream(seed, sentence.id)

    char_list = list(sentence.source)
    for i, observed in enumerate(char_list):
        key_set = inverse.get(observed)
        if not key_set:
            continue
        candidate_list = [observed] + sorted(key_set - {observed})
        char_list[i] = candidate_list[int(rng.integers(len(candidate_list)))]

    return "".join(char_list)


class RandomCandidateCorrector:
    """入力文字と逆引きで得た候補から一様に選ぶだけの比較用訂正器．"""

    def __init__(self, confusion, seed, jobs=1):
        self.inverse = build_inverse_index(confusion)
        self.seed = seed
        self.jobs = jobs

    def __call__(self, dataset, progress=None):
        return csc_bench.parallel.map_ordered(
            random_candidate_item, dataset, (self.inverse, self.seed), self.jobs, progress
        )


class NoisyChannelCorrector:
    def __init__(self, lm, channel, lam=csc_bench.const.LM_LAMBDA, jobs=1):
        self.lm = lm
        self.channel = channel
        self.lam = lam
        self.jobs = jobs

    def __call__(self, dataset, progress=None):
        return csc_bench.parallel.map_ordered(
            correct_item, dataset, (self.lm, self.channel, self.lam), self.jobs, progress
        )

    def header(self):
        return "order={order} add_k={add_k!r} lambda={lam!r} p_err={p_err!r}".format(
            order=self.lm.order, add_k=self.lm.add_k, lam=self.lam, p_err=self.channel.p_err
        )


if __name__ == "__main__":
    from docopt import docopt

    import csc_bench.confusion
    import csc_bench.corpus
    import local_lib.logger
    import local_lib.serializer

    args = docopt(__doc__)

    local_lib.logger.init("test", level=logging.INFO)

    train = csc_bench.corpus.load_dataset(local_lib.serializer.load_bytes(args["-t"]))
    confusion, _ = csc_bench.confusion.load_confusion(local_lib.serializer.load_bytes(args["-C"]))
    dataset = csc_bench.corpus.load_dataset(local_lib.serializer.load_bytes(args["-i"]))

    lm = train_lm([sentence.target for sentence in train], int(args["-n"]))
    corrector = NoisyChannelCorrector(lm, build_channel(confusion))

    for sentence, prediction in zip(dataset, corrector(dataset)):
        print("{id}\t{prediction}".format(id=sentence.id, prediction=prediction))

#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
中国語スペルチェック (CSC) の評価用データセットを合成し，訂正結果を評価します．

Usage:
  csc.py stats (--confusion FILE | --data FILE) [options]
  csc.py merge-confusion --out FILE <confusion>... [options]
  csc.py split-confusion --confusion FILE --out-dir DIR [--seed SEED] [options]
  csc.py synthesize --corpus FILE --confusion FILE --out FILE [--seed SEED] [options]
  csc.py make-suite --corpus FILE --confusion FILE --out-dir DIR [--seed SEED] [options]
  csc.py train-lm (--data FILE | --corpus FILE) --out FILE [options]
  csc.py correct --data FILE --out FILE [--confusion FILE] [--seed SEED] [options]
  csc.py evaluate --gold FILE --pred FILE [--out FILE] [options]
  csc.py coverage --test FILE --reference FILE [--out FILE] [options]
  csc.py sweep --corpus FILE --confusion FILE --out FILE [--seed SEED] [options]
  csc.py verify --manifest FILE [options]
  csc.py -h | --help

Options:
  -c CONFIG               : CONFIG を設定ファイルとして読み込みます．省略時は config.yaml があれば使います．
  --confusion FILE        : 混淆集合 (key<TAB>value<TAB>tag)．
  --corpus FILE           : 1 行 1 文のきれいなコーパス．
  --data FILE             : データセット (id<TAB>source<TAB>target)．
  --gold FILE             : 正解データセット．
  --pred FILE             : 予測ファイル (id<TAB>prediction)．
  --test FILE             : 被覆率を調べるテストデータセット．
  --reference FILE        : 被覆率の基準にするデータセット．
  --lm FILE               : 言語モデルファイル．
  --manifest FILE         : 検証するマニフェスト．
  --out FILE              : 出力ファイル．
  --out-dir DIR           : 出力ディレクトリ．
  --seed SEED             : 全ての乱数の元になるシード (生成系のコマンドでは必須)．
  --pe PE                 : 置換確率．make-suite では UnseenK と Probs 以外の置換確率．
                            sweep ではカンマ区切りのリスト．
  --key-holdout FRAC      : S_unseen^k に回すキーの割合．
  --value-key FRAC        : 値を S_unseen^v に回すキーの割合．
  --value-holdout FRAC    : 選んだキーから S_unseen^v に回す値の割合．
  --min-train-values N    : S_train に残す値の最小数．
  --min-len N             : コーパスの文の最小長．
  --max-len N             : コーパスの文の最大長．
  --n-valid N             : 検証用プールの文数．
  --n-test N              : テスト用プールの文数．
  --seen-size N           : S_seen のペア数．
  --scontext-size N       : SContext に使う文数．
  --order N               : n-gram の次数．
  --add-k K               : add-k スムージングの k．
  --lambda L              : 言語モデルの重み．
  --p-err P               : 通信路モデルの誤り確率．
  --method METHOD         : 訂正方法 (baseline, identity, random)．[default: baseline]
  --detail FILE           : 文ごとの評価を Excel ファイルに書き出します．
  --xlsx FILE             : sweep の結果を Excel ファイルにも書き出します．
  --keep-correct          : 正しい文を正しいまま保てた割合も出力します．
  --format FORMAT         : 出力形式 (json, tsv, text)．
  --jobs N                : 並列に動かすプロセス数．[default: 1]
  -D                      : デバッグモードで動作します．
"""

import logging
import pathlib
import sys

import docopt

import csc_bench.analysis
import csc_bench.baseline
import csc_bench.confusion
import csc_bench.const
import csc_bench.corpus
import csc_bench.handle
import csc_bench.manifest
import csc_bench.metrics
import csc_bench.report
import csc_bench.rng
import local_lib.config
import local_lib.logger
import local_lib.serializer
from csc_bench.exceptions import CscError, SplitError, SuiteError, UsageError

NAME = "csc"
VERSION = csc_bench.const.VERSION

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

STATUS_SYNTHESIZE = "[synthesize] Sentences"
STATUS_CORRECT = "[correct] Sentences"
STATUS_SWEEP = "[sweep] Sentences"


def parse_number(args, flag, conv, default=None):
    value = args[flag]
    if value is None:
        return default
    try:
        return conv(value)
    except ValueError:
        raise UsageError("invalid value for {flag}: {value!r}".format(flag=flag, value=value))


def get_option(handle, args, flag, conv, section, key):
    return parse_number(args, flag, conv, csc_bench.handle.get_config(handle, section, key))


def get_seed(args):
    seed = parse_number(args, "--seed", int)
    if seed is None:
        raise UsageError("--seed is required")
    try:
        return csc_bench.rng.check_seed(seed)
    except ValueError as e:
        raise UsageError(str(e))


def get_jobs(args):
    jobs = parse_number(args, "--jobs", int, 1)
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")
    return jobs


def get_format(args, default):
    output_format = args["--format"] or default
    if output_format not in csc_bench.report.FORMAT_LIST:
        raise UsageError("unknown format: {format}".format(format=output_format))
    return output_format


def load_confusion(path):
    return csc_bench.confusion.load_confusion(local_lib.serializer.load_bytes(path))


def load_dataset(path):
    return csc_bench.corpus.load_dataset(local_lib.serializer.load_bytes(path))


def load_corpus(handle, args):
    return csc_bench.corpus.load_corpus(
        local_lib.serializer.load_bytes(args["--corpus"]),
        get_option(handle, args, "--min-len", int, "corpus", "min_len"),
        get_option(handle, args, "--max-len", int, "corpus", "max_len"),
    )


def partition(handle, args, sentence_list, seed):
    return csc_bench.corpus.partition_corpus(
        sentence_list,
        get_option(handle, args, "--n-valid", int, "corpus", "n_valid"),
        get_option(handle, args, "--n-test", int, "corpus", "n_test"),
        csc_bench.rng.derive_seed(seed, "partition"),
    )


def split_spec(handle, args, seed):
    try:
        return csc_bench.confusion.SplitSpec(
            seed=csc_bench.rng.derive_seed(seed, "split"),
            key_holdout_frac=get_option(handle, args, "--key-holdout", float, "split", "key_holdout_frac"),
            value_key_frac=get_option(handle, args, "--value-key", float, "split", "value_key_frac"),
            value_holdout_frac=get_option(handle, args, "--value-holdout", float, "split", "value_holdout_frac"),
            min_train_values=get_option(handle, args, "--min-train-values", int, "split", "min_train_values"),
        )
    except SplitError as e:
        raise UsageError(str(e))


def write_manifest(manifest_path, subcommand, argv, seed, input_list, output_list, counters, extra=None):
    manifest = csc_bench.manifest.build(
        subcommand,
        argv,
        seed,
        input_list,
        output_list,
        pathlib.Path(manifest_path).parent,
        counters,
        extra,
    )
    csc_bench.manifest.store(manifest_path, manifest)


def write_output_with_manifest(handle, args, argv, subcommand, text, seed, input_list, counters, extra=None):
    out_path = pathlib.Path(args["--out"])
    local_lib.serializer.store_text(out_path, text)

    write_manifest(
        csc_bench.manifest.manifest_path_for(out_path),
        subcommand,
        argv,
        seed,
        input_list,
        [out_path],
        counters,
        extra,
    )


def confusion_stats_rows(confusion):
    row_list = []
    for name, subset in [
        ("S", confusion),
        ("S_p", csc_bench.confusion.filter_by_tag(confusion, csc_bench.confusion.Tag.PHONETIC)),
        ("S_g", csc_bench.confusion.filter_by_tag(confusion, csc_bench.confusion.Tag.GRAPHIC)),
    ]:
        row_list.append({"set": name, **csc_bench.confusion.stats(subset)._asdict()})
    return row_list


def execute_stats(handle, args, argv):
    output_format = get_format(args, "text")

    if args["--confusion"] is not None:
        confusion, num_duplicate = load_confusion(args["--confusion"])
        text = csc_bench.report.render_records(confusion_stats_rows(confusion), output_format)
    else:
        text = csc_bench.report.render_record(
            csc_bench.analysis.dataset_stats(load_dataset(args["--data"])), output_format
        )

    sys.stdout.write(text)


def execute_merge_confusion(handle, args, argv):
    confusion = csc_bench.confusion.ConfusionSet()
    num_warning = 0
    for path in args["<confusion>"]:
        part, num_duplicate = load_confusion(path)
        num_warning += num_duplicate
        confusion = csc_bench.confusion.merge(confusion, part)

    logging.info(
        "Merged confusion set: {keys:,} keys, {pairs:,} pairs".format(keys=len(confusion), pairs=confusion.num_pairs)
    )

    write_output_with_manifest(
        handle,
        args,
        argv,
        "merge-confusion",
        csc_bench.confusion.dump_confusion(confusion),
        None,
        args["<confusion>"],
        {"keys": len(confusion), "pairs": confusion.num_pairs, "warnings": num_warning},
    )


def execute_split_confusion(handle, args, argv):
    seed = get_seed(args)
    confusion, num_duplicate = load_confusion(args["--confusion"])

    result = csc_bench.confusion.split(confusion, split_spec(handle, args, seed))
    result.verify(confusion)

    output_list = []
    for name in ["s_train", "s_unseen_k", "s_unseen_v"]:
        path = csc_bench.handle.get_confusion_file_path(handle, name)
        local_lib.serializer.store_text(path, csc_bench.confusion.dump_confusion(getattr(result, name)))
        output_list.append(path)

    row_list = confusion_stats_rows(confusion)
    for name, subset in [
        ("S_train", result.s_train),
        ("S_unseen_k", result.s_unseen_k),
        ("S_unseen_v", result.s_unseen_v),
    ]:
        row_list.append({"set": name, **csc_bench.confusion.stats(subset)._asdict()})

    write_manifest(
        csc_bench.handle.get_manifest_file_path(handle),
        "split-confusion",
        argv,
        seed,
        [args["--confusion"]],
        output_list,
        {"pairs": confusion.num_pairs, "warnings": num_duplicate},
        {"confusion_sets": row_list},
    )

    sys.stdout.write(csc_bench.report.render_records(row_list, get_format(args, "text")))


def execute_synthesize(handle, args, argv):
    seed = get_seed(args)
    p_e = get_option(handle, args, "--pe", float, "synthesis", "p_e")
    confusion, num_duplicate = load_confusion(args["--confusion"])
    sentence_list, drop_stat = load_corpus(handle, args)

    try:
        cfg = csc_bench.corpus.CorruptionConfig(p_e, seed)
    except ValueError as e:
        raise UsageError(str(e))

    dataset = csc_bench.corpus.build_dataset(
        sentence_list,
        confusion,
        cfg,
        get_jobs(args),
        csc_bench.handle.progress_func(handle, STATUS_SYNTHESIZE, len(sentence_list)),
    )

    write_output_with_manifest(
        handle,
        args,
        argv,
        "synthesize",
        csc_bench.corpus.dump_dataset(dataset),
        seed,
        [args["--corpus"], args["--confusion"]],
        {
            "sentences": len(dataset),
            "errors": csc_bench.corpus.count_error(dataset),
            "warnings": num_duplicate,
            "dropped": drop_stat,
        },
        {"p_e": p_e},
    )


def execute_make_suite(handle, args, argv):
    seed = get_seed(args)
    jobs = get_jobs(args)

    csc_bench.handle.set_status(handle, "入力を読み込んでいます...")

    s_full, num_duplicate = load_confusion(args["--confusion"])
    s_p = csc_bench.confusion.filter_by_tag(s_full, csc_bench.confusion.Tag.PHONETIC)
    s_g = csc_bench.confusion.filter_by_tag(s_full, csc_bench.confusion.Tag.GRAPHIC)

    sentence_list, drop_stat = load_corpus(handle, args)
    pools = partition(handle, args, sentence_list, seed)

    splits = csc_bench.confusion.split(s_full, split_spec(handle, args, seed))
    splits.verify(s_full)

    synthesis = handle["config"]["synthesis"]
    try:
        suite_config = csc_bench.corpus.SuiteConfig(
            seed=seed,
            p_e=get_option(handle, args, "--pe", float, "synthesis", "p_e"),
            p_e_unseen_k=synthesis["p_e_unseen_k"],
            probs=tuple(synthesis["probs"]),
            seen_size=get_option(handle, args, "--seen-size", int, "synthesis", "seen_size"),
            scontext_size=get_option(handle, args, "--scontext-size", int, "synthesis", "scontext_size"),
        )
    except SuiteError as e:
        raise UsageError(str(e))

    # NOTE: Trainset/Validset は 1 回ずつ，テスト用プールは Probs の数 + 6 回合成する
    total = len(pools[0]) + len(pools[1]) + len(pools[2]) * (len(suite_config.probs) + 6)
    suite = csc_bench.corpus.build_suite(
        pools,
        splits,
        s_full,
        s_p,
        s_g,
        None,
        suite_config,
        jobs,
        csc_bench.handle.progress_func(handle, STATUS_SYNTHESIZE, total),
        lambda status: csc_bench.handle.set_status(handle, status),
    )

    csc_bench.handle.set_status(handle, "ファイルを書き出しています...")

    output_list = []
    for name, confusion in [
        ("s_train", splits.s_train),
        ("s_unseen_k", splits.s_unseen_k),
        ("s_unseen_v", splits.s_unseen_v),
        ("s_seen", suite.s_seen),
    ]:
        path = csc_bench.handle.get_confusion_file_path(handle, name)
        local_lib.serializer.store_text(path, csc_bench.confusion.dump_confusion(confusion))
        output_list.append(path)

    for name, dataset in suite.datasets.items():
        path = csc_bench.handle.get_out_dir_path(handle) / suite.manifest["datasets"][name]["file"]
        local_lib.serializer.store_text(path, csc_bench.corpus.dump_dataset(dataset))
        output_list.append(path)

    write_manifest(
        csc_bench.handle.get_manifest_file_path(handle),
        "make-suite",
        argv,
        seed,
        [args["--corpus"], args["--confusion"]],
        output_list,
        {
            "sentences": sum(len(dataset) for dataset in suite.datasets.values()),
            "errors": sum(csc_bench.corpus.count_error(dataset) for dataset in suite.datasets.values()),
            "warnings": num_duplicate,
            "dropped": drop_stat,
        },
        {"suite": suite.manifest},
    )

    csc_bench.handle.set_status(handle, "完了しました！")


def execute_train_lm(handle, args, argv):
    if args["--data"] is not None:
        text_list = [sentence.target for sentence in load_dataset(args["--data"])]
        input_path = args["--data"]
    else:
        text_list = [sentence.text for sentence in load_corpus(handle, args)[0]]
        input_path = args["--corpus"]

    lm = csc_bench.baseline.train_lm(
        text_list,
        get_option(handle, args, "--order", int, "baseline", "order"),
        get_option(handle, args, "--add-k", float, "baseline", "add_k"),
    )
    perplexity = lm.perplexity(text_list)
    logging.info("Training perplexity: {perplexity:.2f}".format(perplexity=perplexity))

    write_output_with_manifest(
        handle,
        args,
        argv,
        "train-lm",
        csc_bench.baseline.dump_lm(lm),
        None,
        [input_path],
        {"sentences": len(text_list), "vocab_size": lm.vocab_size},
        {"perplexity": perplexity},
    )


def create_corrector(handle, args, jobs):
    method = args["--method"]
    if method == "identity":
        return (csc_bench.baseline.identity_corrector, None, [])

    if args["--confusion"] is None:
        raise UsageError("--confusion is required for method {method}".format(method=method))
    confusion, _ = load_confusion(args["--confusion"])

    if method == "random":
        return (
            csc_bench.baseline.RandomCandidateCorrector(confusion, get_seed(args), jobs),
            "method=random",
            [args["--confusion"]],
        )

    if method == "baseline":
        if args["--lm"] is None:
            raise UsageError("--lm is required for method baseline")
        lm = csc_bench.baseline.load_lm(local_lib.serializer.load_text(args["--lm"]))
        try:
            channel = csc_bench.baseline.build_channel(
                confusion, get_option(handle, args, "--p-err", float, "baseline", "p_err")
            )
        except CscError as e:
            raise UsageError(str(e))
        corrector = csc_bench.baseline.NoisyChannelCorrector(
            lm, channel, get_option(handle, args, "--lambda", float, "baseline", "lambda"), jobs
        )
        return (corrector, corrector.header(), [args["--confusion"], args["--lm"]])

    raise UsageError("unknown method: {method}".format(method=method))


def execute_correct(handle, args, argv):
    jobs = get_jobs(args)
    dataset = load_dataset(args["--data"])
    corrector, header, input_list = create_corrector(handle, args, jobs)

    csc_bench.handle.set_status(handle, "訂正しています...")
    progress = csc_bench.handle.progress_func(handle, STATUS_CORRECT, len(dataset))
    if args["--method"] == "identity":
        prediction_list = corrector(dataset)
    else:
        prediction_list = corrector(dataset, progress)

    num_changed = sum(sentence.source != prediction for sentence, prediction in zip(dataset, prediction_list))
    logging.info("Changed {count:,} of {total:,} sentences".format(count=num_changed, total=len(dataset)))

    write_output_with_manifest(
        handle,
        args,
        argv,
        "correct",
        csc_bench.metrics.dump_predictions([sentence.id for sentence in dataset], prediction_list, header),
        parse_number(args, "--seed", int),
        [args["--data"]] + input_list,
        {"sentences": len(dataset), "changed": num_changed},
    )


def execute_evaluate(handle, args, argv):
    output_format = get_format(args, "text")

    dataset = load_dataset(args["--gold"])
    prediction_map = csc_bench.metrics.load_predictions(local_lib.serializer.load_bytes(args["--pred"]))

    instance_list = csc_bench.metrics.join_predictions(dataset, prediction_map)
    report = csc_bench.metrics.evaluate(instance_list)

    keep_correct = None
    if args["--keep-correct"]:
        keep_correct = csc_bench.metrics.keep_correct_accuracy(instance_list)

    text = csc_bench.report.render_eval(report, output_format, keep_correct)

    output_list = []
    if args["--detail"] is not None:
        csc_bench.report.store_detail_xlsx(args["--detail"], instance_list)
        output_list.append(pathlib.Path(args["--detail"]))

    if args["--out"] is None:
        sys.stdout.write(text)
        return

    out_path = pathlib.Path(args["--out"])
    local_lib.serializer.store_text(out_path, text)
    write_manifest(
        csc_bench.manifest.manifest_path_for(out_path),
        "evaluate",
        argv,
        None,
        [args["--gold"], args["--pred"]],
        [out_path] + output_list,
        {"sentences": len(instance_list)},
    )


def execute_coverage(handle, args, argv):
    report = csc_bench.analysis.coverage(load_dataset(args["--test"]), load_dataset(args["--reference"]))
    logging.info(report.note)

    text = csc_bench.report.render_record(report, get_format(args, "json"))

    if args["--out"] is None:
        sys.stdout.write(text)
    else:
        write_output_with_manifest(
            handle,
            args,
            argv,
            "coverage",
            text,
            None,
            [args["--test"], args["--reference"]],
            {"test_pair_tokens": report.test_pair_tokens},
        )


def parse_pe_list(handle, args):
    if args["--pe"] is None:
        return csc_bench.handle.get_config(handle, "sweep", "pe_list")
    try:
        return [float(p_e) for p_e in args["--pe"].split(",")]
    except ValueError:
        raise UsageError("invalid value for --pe: {value!r}".format(value=args["--pe"]))


def execute_sweep(handle, args, argv):
    seed = get_seed(args)
    jobs = get_jobs(args)

    confusion, num_duplicate = load_confusion(args["--confusion"])
    sentence_list, drop_stat = load_corpus(handle, args)
    _, _, test_pool = partition(handle, args, sentence_list, seed)

    corrector, header, input_list = create_corrector(handle, args, jobs)
    pe_list = parse_pe_list(handle, args)

    progress = csc_bench.handle.progress_func(handle, STATUS_SWEEP, len(test_pool) * len(pe_list))
    result = csc_bench.analysis.sweep(
        test_pool,
        confusion,
        pe_list,
        corrector,
        seed,
        jobs,
        progress,
        lambda status: csc_bench.handle.set_status(handle, status),
    )

    out_path = pathlib.Path(args["--out"])
    local_lib.serializer.store_text(out_path, csc_bench.report.render_sweep_csv(result))
    output_list = [out_path]

    if args["--xlsx"] is not None:
        csc_bench.report.store_sweep_xlsx(args["--xlsx"], result)
        output_list.append(pathlib.Path(args["--xlsx"]))

    write_manifest(
        csc_bench.manifest.manifest_path_for(out_path),
        "sweep",
        argv,
        seed,
        [args["--corpus"], args["--confusion"]] + input_list,
        output_list,
        {"sentences": len(test_pool), "warnings": num_duplicate, "dropped": drop_stat},
        {"pe_list": [p_e for p_e, _ in result], "corrector": header},
    )


def execute_verify(handle, args, argv):
    mismatch_list = csc_bench.manifest.verify(args["--manifest"])
    if len(mismatch_list) != 0:
        raise CscError("{count} files do not match the manifest".format(count=len(mismatch_list)))

    logging.info("All digests match")


COMMAND_LIST = [
    ("stats", execute_stats),
    ("merge-confusion", execute_merge_confusion),
    ("split-confusion", execute_split_confusion),
    ("synthesize", execute_synthesize),
    ("make-suite", execute_make_suite),
    ("train-lm", execute_train_lm),
    ("correct", execute_correct),
    ("evaluate", execute_evaluate),
    ("coverage", execute_coverage),
    ("sweep", execute_sweep),
    ("verify", execute_verify),
]


def execute(args, argv):
    config = local_lib.config.load_with_default(csc_bench.const.DEFAULT_CONFIG, args["-c"])

    if config["log"]["dir"] is not None:
        local_lib.logger.add_file_handler(NAME, pathlib.Path(config["base_dir"], config["log"]["dir"]))

    handle = csc_bench.handle.create(config, args["--out-dir"])
    try:
        for command, func in COMMAND_LIST:
            if args[command]:
                func(handle, args, argv)
                break
    finally:
        csc_bench.handle.finish(handle)


def run(argv):
    try:
        args = docopt.docopt(__doc__, argv=argv, version="{name} {version}".format(name=NAME, version=VERSION))
    except docopt.DocoptExit as e:
        sys.stderr.write(str(e) + "\n")
        return EXIT_USAGE
    except SystemExit:
        return EXIT_OK

    local_lib.logger.init(NAME, level=logging.DEBUG if args["-D"] else logging.INFO)

    try:
        execute(args, argv)
    except UsageError as e:
        sys.stderr.write("{name}: {error}\n\n".format(name=NAME, error=e))
        sys.stderr.write(docopt.printable_usage(__doc__) + "\n")
        return EXIT_USAGE
    except (CscError, OSError) as e:
        logging.error(str(e))
        return EXIT_DATA

    return EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))


######################################################################
if __name__ == "__main__":
    main()

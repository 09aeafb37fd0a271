#!/usr/bin/env python3
# -*- coding: utf-8 -*-

NAME = "csc-bench"
VERSION = "0.1.0"

TAG_LABEL_PHONETIC = "P"
TAG_LABEL_GRAPHIC = "G"
TAG_LABEL_BOTH = "PG"

COMMENT_PREFIX = "#"

# NOTE: 論文の「size of each confusion set」の表から逆算した値
KEY_HOLDOUT_FRAC = 0.23
VALUE_KEY_FRAC = 0.98
VALUE_HOLDOUT_FRAC = 0.13
MIN_TRAIN_VALUES = 1

P_E = 0.05
P_E_UNSEEN_K = 0.15
PROBS_PE_LIST = [0.01, 0.02, 0.05, 0.10, 0.15, 0.20, 0.30]

N_VALID = 5000
N_TEST = 5000
SEEN_SIZE = 5000
SCONTEXT_SIZE = 5000

LM_ORDER = 3
LM_ADD_K = 0.1
LM_LAMBDA = 1.0
CHANNEL_P_ERR = 0.05

LM_BOS = "<s>"
LM_EOS = "</s>"
LM_UNK = "<unk>"

DATASET_TRAIN = "Trainset"
DATASET_VALID = "Validset"
DATASET_REGULAR = "Regular"
DATASET_PROBS = "Probs"
DATASET_PHONETICS = "Phonetics"
DATASET_GRAPHICS = "Graphics"
DATASET_SERROR = "SError"
DATASET_SCONTEXT = "SContext"
DATASET_UNSEEN_K = "UnseenK"
DATASET_UNSEEN_V = "UnseenV"
DATASET_CORRECT = "Correct"

DATASET_FILE_NAME = {
    DATASET_TRAIN: "trainset.tsv",
    DATASET_VALID: "validset.tsv",
    DATASET_REGULAR: "regular.tsv",
    DATASET_PHONETICS: "phonetics.tsv",
    DATASET_GRAPHICS: "graphics.tsv",
    DATASET_SERROR: "serror.tsv",
    DATASET_SCONTEXT: "scontext.tsv",
    DATASET_UNSEEN_K: "unseen_k.tsv",
    DATASET_UNSEEN_V: "unseen_v.tsv",
    DATASET_CORRECT: "correct.tsv",
}
PROBS_FILE_NAME = "probs_{p_e:g}.tsv"
PROBS_DATASET_NAME = "Probs-{p_e:g}"

CONFUSION_FILE_NAME = {
    "s_train": "s_train.tsv",
    "s_unseen_k": "s_unseen_k.tsv",
    "s_unseen_v": "s_unseen_v.tsv",
    "s_seen": "s_seen.tsv",
}

MANIFEST_FILE_NAME = "manifest.json"

ERROR_LIST_LIMIT = 10

DEFAULT_CONFIG = {
    "corpus": {
        "min_len": 1,
        "max_len": 512,
        "n_valid": N_VALID,
        "n_test": N_TEST,
    },
    "split": {
        "key_holdout_frac": KEY_HOLDOUT_FRAC,
        "value_key_frac": VALUE_KEY_FRAC,
        "value_holdout_frac": VALUE_HOLDOUT_FRAC,
        "min_train_values": MIN_TRAIN_VALUES,
    },
    "synthesis": {
        "p_e": P_E,
        "p_e_unseen_k": P_E_UNSEEN_K,
        "probs": PROBS_PE_LIST,
        "seen_size": SEEN_SIZE,
        "scontext_size": SCONTEXT_SIZE,
    },
    "baseline": {
        "order": LM_ORDER,
        "add_k": LM_ADD_K,
        "lambda": LM_LAMBDA,
        "p_err": CHANNEL_P_ERR,
    },
    "sweep": {
        "pe_list": PROBS_PE_LIST,
    },
    "log": {
        "dir": None,
    },
}

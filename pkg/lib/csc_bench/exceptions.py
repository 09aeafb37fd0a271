#!/usr/bin/env python3
# -*- coding: utf-8 -*-


class UsageError(Exception):
    pass


class CscError(ValueError):
    pass


class ConfusionParseError(CscError):
    def __init__(self, line_no, message):
        super().__init__("line {line_no}: {message}".format(line_no=line_no, message=message))
        self.line_no = line_no


class CorpusError(CscError):
    def __init__(self, message, offset=None):
        if offset is not None:
            message = "byte offset {offset}: {message}".format(offset=offset, message=message)
        super().__init__(message)
        self.offset = offset


class DatasetFormatError(CscError):
    def __init__(self, line_no, message):
        super().__init__("line {line_no}: {message}".format(line_no=line_no, message=message))
        self.line_no = line_no


class InvariantError(CscError):
    pass


class SplitError(CscError):
    pass


class SuiteError(CscError):
    pass


class SeenPairError(CscError):
    pass


class ScontextError(CscError):
    pass


class EvaluationError(CscError):
    def __init__(self, message, ids=()):
        ids = list(ids)
        if len(ids) != 0:
            message = "{message}: {ids}".format(message=message, ids=", ".join(ids))
        super().__init__(message)
        self.ids = ids


class LanguageModelError(CscError):
    pass


class SweepError(CscError):
    def __init__(self, p_e, message):
        super().__init__("p_e={p_e}: {message}".format(p_e=p_e, message=message))
        self.p_e = p_e

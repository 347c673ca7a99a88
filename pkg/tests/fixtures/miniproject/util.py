"""Demo helpers."""


def summarize(values):
    doubled = [v * 2 for v in values]
    settings = {"limits": {"low": 0, "high": 10}}
    return doubled, settings


def describe(obj):
    return sorted(type(obj).__dict__)

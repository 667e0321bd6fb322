"""Exponential splitting analysis of nonautonomous linear difference systems."""

import json

from ._expsplit import (
    ConfigError,
    Error,
    NotStronglyInvariant,
    corpus_names,
    evolution,
    log2_norm,
    projection,
    run,
    schema_version,
)
from ._expsplit import verify as _verify

__all__ = [
    "CommandFailed",
    "ConfigError",
    "Error",
    "NotStronglyInvariant",
    "analyze",
    "corpus_names",
    "evolution",
    "identities",
    "log2_norm",
    "projection",
    "run",
    "schema_version",
    "verify",
]


class CommandFailed(RuntimeError):
    def __init__(self, exit_code, message):
        super().__init__(message)
        self.exit_code = exit_code


def _json_command(command, target, **kwargs):
    code, output, diagnostic = run(command, target, **kwargs)
    if code != 0 and not output:
        raise CommandFailed(code, diagnostic)
    return json.loads(output)


def analyze(target, **kwargs):
    """Full analysis report of a corpus entry or definition file as a dict."""
    return _json_command("analyze", target, **kwargs)


def identities(target, **kwargs):
    """Identity residuals; a missing skew-evolution suite shows up as an "error" entry."""
    return _json_command("identities", target, **kwargs)


def verify(target, certificates, **kwargs):
    """Verify a certificate dict (or a list of them) on the target's window."""
    return json.loads(_verify(target, json.dumps(certificates), **kwargs))

"""mdcf.commands
=================
Mini-README: Handlers behind the ``mdcf`` command line. Each handler takes a validated
``RunConfig`` and an output stream and returns an ``ExitCode``; argument parsing lives
in the ``mdcf_cli`` entry script.
"""

from .expand import cmd_expand
from .jp import cmd_jp
from .verify import cmd_verify

__all__ = ["cmd_expand", "cmd_jp", "cmd_verify"]

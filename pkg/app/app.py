"""
GroupcastBC command line.

Usage:
    groupcast build <spec> [--form FORM] [--assign FILE] [--redundancy MODE] [-o FILE] [--text]
    groupcast eliminate <system> --eliminate VARS [--assign FILE] [--redundancy MODE] [-o FILE] [--text]
    groupcast compare <a> <b> [--assign FILE] [--tol TOL] [-o FILE] [--text]
    groupcast gamma <dist> [--order ORDER] [--tol TOL] [-o FILE] [--text]
    groupcast admissible <dist> [--order ORDER] [--tol TOL] [-o FILE] [--text]
    groupcast covering <experiment> [--seed SEED] [--cap CAP] [-o FILE] [--text]
    groupcast demo <name> [--seed SEED] [-o FILE] [--text]
    groupcast -h | --help

Options:
    --form FORM             split | projected | cone | binning | binning-projected [default: split]
    --assign FILE           Entropy assignment (joint pmf, entropy table, X' or combination network)
    --redundancy MODE       none | syntactic | exact
    --eliminate VARS        Comma separated variables to project away, e.g. "r_1->12,r_1->1"
    --order ORDER           Superposition order: inclusion, discrete or an order JSON file
    --tol TOL               Additive tolerance
    --seed SEED             Override the seed
    --cap CAP               Override the covering tuple cap
    -o FILE, --output FILE  Write the JSON artifact to FILE
    --text                  Print a human-readable report instead of JSON
    -h, --help              Show this screen

Exit status: 0 ok, 1 negative verdict, 2 input error, 3 resource cap.
"""

import json
import logging
import sys
from typing import List, Optional

from docopt import docopt, DocoptExit
from pydantic import ValidationError

from app.config.settings import get_settings
from app.core.utils.error_handler import EXIT_INPUT, ErrorHandler
from app.core.utils.io_utils import write_json_atomic
from app.modules.commands import Command, execute

logger = logging.getLogger(__name__)
settings = get_settings()

VERBS = ("build", "eliminate", "compare", "gamma", "admissible", "covering", "demo")


def setup_logging(level: Optional[str] = None):
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def parse_command(opts: dict) -> Command:
    """Turn docopt's option dict into a validated Command."""
    verb = next(v for v in VERBS if opts.get(v))
    inputs = [opts[k] for k in ("<spec>", "<system>", "<a>", "<b>", "<dist>", "<experiment>") if opts.get(k)]
    return Command(
        verb=verb,
        inputs=inputs,
        name=opts.get("<name>"),
        output=opts.get("--output"),
        order=opts.get("--order"),
        eliminate=opts.get("--eliminate"),
        tol=opts.get("--tol"),
        redundancy=opts.get("--redundancy"),
        seed=opts.get("--seed"),
        cap=opts.get("--cap"),
        assign=opts.get("--assign"),
        form=opts.get("--form") or "split",
        text=bool(opts.get("--text")),
    )


def run(command: Command, handler: Optional[ErrorHandler] = None) -> int:
    """Execute ``command``, write its artifact and return the exit status."""
    handler = handler or ErrorHandler()
    try:
        result = execute(command)
    except Exception as e:
        info = handler.handle_error(e, {"command": command.model_dump(mode="json")})
        print(f"error: {info['message']} ({info['suggestion']})", file=sys.stderr)
        return info["exit_code"]

    if command.output is not None:
        path = write_json_atomic(command.output, result.payload)
        logger.info(f"wrote {path}")
    if command.text:
        print(result.report)
    elif command.output is None:
        print(json.dumps(result.payload, ensure_ascii=False, indent=2))
    return result.status


def main(args: Optional[List[str]] = None) -> int:
    setup_logging()
    try:
        opts = docopt(__doc__, args)
    except DocoptExit as e:
        print(str(e), file=sys.stderr)
        return EXIT_INPUT
    try:
        command = parse_command(opts)
    except ValidationError as e:
        for err in e.errors():
            print(f"error: {'.'.join(map(str, err['loc'])) or 'command'}: {err['msg']}", file=sys.stderr)
        return EXIT_INPUT
    return run(command)


if __name__ == "__main__":
    sys.exit(main())

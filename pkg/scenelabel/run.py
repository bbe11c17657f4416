# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""scenelabel <command> [options]

Label visual relationships from a handful of examples.

For instance, to generate the synthetic acceptance dataset and run every
stage on it:
 $ scenelabel generate --output-dir data
 $ scenelabel pipeline --dataset data/dataset.json --output-dir out

Exit status is 0 on success, 1 for usage or configuration errors, 2 for
invalid data and 3 for numerical failures.
"""

__all__ = [
    'UsageError',
    'build_parser',
    'main',
    ]

import argparse
import json
import logging
import os
import sys

from scenelabel.config import METHODS, apply_override, load_config
from scenelabel.errors import ConfigError, ScenelabelError, exit_status
from scenelabel.pipeline import Pipeline, sweep
from scenelabel.stages import StageFailure
from scenelabel.synthgen import (
    acceptance_spec,
    generate,
    planted_spec,
    write_generated,
    )


COMMANDS = ('generate', 'label', 'train', 'eval', 'analyze', 'pipeline',
            'sweep')


class UsageError(ConfigError):
    """The command line could not be parsed."""

    def __init__(self, message, usage):
        super().__init__(message)
        self.usage = usage


class ArgumentParser(argparse.ArgumentParser):
    """An argument parser that raises instead of exiting."""

    def error(self, message):
        raise UsageError(message, self.format_usage())


def _config_options():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--config', help='JSON configuration file')
    parser.add_argument('--dataset', help='dataset JSON file')
    parser.add_argument('--output-dir', dest='output_dir',
                        help='directory receiving the outputs')
    parser.add_argument('--method', choices=METHODS,
                        help='labeling method (default: ours)')
    parser.add_argument('--seed', type=int, help='root random seed')
    parser.add_argument('--n-labeled', dest='n_labeled', type=int,
                        help='labeled examples per predicate')
    parser.add_argument('--threads', type=int, help='worker threads')
    parser.add_argument(
        '--set', dest='overrides', action='append', default=[],
        metavar='SECTION.KEY=JSON', help='override one configuration key')
    return parser


def _common_options():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('-v', '--verbose', action='store_true',
                        help='log debugging detail')
    return parser


def build_parser():
    common = _common_options()
    configured = _config_options()
    parser = ArgumentParser(
        prog='scenelabel', description=__doc__.splitlines()[2])
    commands = parser.add_subparsers(dest='command', metavar='command',
                                     parser_class=ArgumentParser)
    commands.required = True
    generate_parser = commands.add_parser(
        'generate', parents=[common], help='write a synthetic dataset')
    generate_parser.add_argument('--output-dir', dest='output_dir',
                                 default='synthetic')
    generate_parser.add_argument('--seed', type=int, default=0)
    generate_parser.add_argument(
        '--instances', type=int, default=None,
        help='instances per predicate')
    generate_parser.add_argument(
        '--negative-fraction', dest='negative_fraction', type=float,
        default=0.2, help='distractor pairs per planted relationship')
    generate_parser.add_argument(
        '--planted', type=int, default=None, metavar='K',
        help='generate one predicate with K spatial subtypes instead')
    generate_parser.add_argument('--threads', type=int, default=1)
    helps = {
        'label': 'write probabilistic labels for the unlabeled pairs',
        'train': 'train the classifier on labels.jsonl',
        'eval': 'evaluate labels.jsonl and classifier.json',
        'analyze': 'count subtypes and fit complexity against F1',
        'pipeline': 'run every stage',
        'sweep': 'repeat labeling over several labeled-set sizes',
        }
    for name in COMMANDS[1:]:
        commands.add_parser(name, parents=[common, configured],
                            help=helps[name])
    return parser


def _effective_config(args):
    config = load_config(args.config)
    for key in ('dataset', 'output_dir', 'method', 'seed', 'threads'):
        value = getattr(args, key)
        if value is not None:
            config = apply_override(
                config, '{}={}'.format(key, json.dumps(value)))
    if args.n_labeled is not None:
        config = apply_override(
            config, 'split.n_labeled={}'.format(args.n_labeled))
    for assignment in args.overrides:
        config = apply_override(config, assignment)
    return config


def _generate(args, stdout):
    if args.planted is not None:
        if args.planted < 1:
            raise ConfigError('--planted needs K >= 1')
        spec = planted_spec(args.planted, args.seed,
                            args.instances or 200)
    else:
        spec = acceptance_spec(args.seed, args.instances or 420,
                               args.negative_fraction)
    ds, manifest = generate(spec, args.threads)
    paths = write_generated(ds, manifest, args.output_dir)
    stdout.write('wrote {}\n'.format(' '.join(paths)))


def _run(args, stdout):
    config = _effective_config(args)
    pipeline = Pipeline(config)
    command = args.command
    if command == 'pipeline':
        report = pipeline.run()
        stdout.write('macro F1 {:.4f}\n'.format(
            report.label_report.macro['f1']))
        if report.recall is not None:
            for k, value in report.recall.recall_at_k.items():
                stdout.write('recall@{} {:.4f}\n'.format(k, value))
    elif command == 'sweep':
        rows = sweep(config, pipeline.runner)
        stdout.write('wrote {} sweep rows\n'.format(len(rows)))
    else:
        pipeline.runner.clear_marker()
        ds = pipeline.ingest()
        split = pipeline.split(ds)
        if command == 'label':
            pipeline.label(split)
        elif command == 'train':
            pipeline.train(split, pipeline.read_labels(split))
        elif command == 'eval':
            report, _, _ = pipeline.evaluate(
                split, pipeline.read_labels(split),
                pipeline.read_classifier(split))
            stdout.write('macro F1 {:.4f}\n'.format(report.macro['f1']))
        elif command == 'analyze':
            pipeline.analyze(ds, split)
    for name in pipeline.outputs:
        stdout.write('wrote {}\n'.format(
            os.path.join(config.output_dir, name)))


def _configure_logging(verbose, stderr):
    handler = logging.StreamHandler(stderr)
    handler.setFormatter(logging.Formatter(
        '%(asctime)s %(levelname)s %(name)s: %(message)s'))
    logger = logging.getLogger('scenelabel')
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    return logger, handler


def main(argv=None, stdout=None, stderr=None):
    """Run the command line and return the exit status."""
    if argv is None:
        argv = sys.argv[1:]
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        stderr.write(e.usage)
        stderr.write('scenelabel: error: {}\n'.format(e))
        return e.exit_status
    logger, handler = _configure_logging(args.verbose, stderr)
    try:
        if args.command == 'generate':
            _generate(args, stdout)
        else:
            _run(args, stdout)
    except StageFailure as e:
        stderr.write('scenelabel: {}\n'.format(e))
        return e.exit_status
    except ScenelabelError as e:
        stderr.write('scenelabel: {}: {}\n'.format(type(e).__name__, e))
        return exit_status(e)
    finally:
        logger.removeHandler(handler)
    return 0


def console_main():
    sys.exit(main())


if __name__ == '__main__':
    console_main()

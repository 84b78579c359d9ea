#!/usr/bin/env python3

import sys
import os
import argparse

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
from urysel.io_functions.reports import load_json

# keys that legitimately differ between two runs
SKIP = ('config', )


def compare(left, right, path='', skip=SKIP):
    """Collect paths where two JSON reports differ.

    :param left: first decoded report
    :param right: second decoded report
    :param str path: path prefix of the compared values
    :param tuple skip: top-level keys left out of the comparison

    :return list: human readable differences
    """
    if isinstance(left, dict) and isinstance(right, dict):
        diffs = []
        for key in sorted(set(left) | set(right)):
            if not path and key in skip:
                continue
            sub = '{}/{}'.format(path, key)
            if key not in left or key not in right:
                diffs.append('{}: only in {}'.format(
                    sub, 'left' if key in left else 'right'))
                continue
            diffs.extend(compare(left[key], right[key], sub, skip))
        return diffs
    if isinstance(left, list) and isinstance(right, list):
        if len(left) != len(right):
            return ['{}: length {} != {}'.format(path, len(left), len(right))]
        diffs = []
        for i, (a, b) in enumerate(zip(left, right)):
            diffs.extend(compare(a, b, '{}/{}'.format(path, i), skip))
        return diffs
    if left != right:
        return ['{}: {!r} != {!r}'.format(path or '/', left, right)]

    return []


def main(left, right, with_config=False):
    diffs = compare(load_json(left), load_json(right),
                    skip=() if with_config else SKIP)
    for line in diffs:
        print(line)
    print('{} difference(s)'.format(len(diffs)))

    return 1 if diffs else 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description='Compare two urysel reports.')

    parser.add_argument('left',
                        metavar='FILE',
                        type=str,
                        help='first report')
    parser.add_argument('right',
                        metavar='FILE',
                        type=str,
                        help='second report')
    parser.add_argument('--with-config',
                        action='store_true',
                        help='compare the embedded run configuration too')
    args = parser.parse_args()

    sys.exit(main(args.left, args.right, args.with_config))

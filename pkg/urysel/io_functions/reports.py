"""JSON documents of urysel.

Rationals are written as "p/q" strings, reports with sorted keys and no
timestamps so that equal runs give byte-identical files.
"""

import json
from enum import Enum
from fractions import Fraction

import numpy as np

from urysel.core.domain import Ball, Cluster, IdealApprox
from urysel.core.effective import builtin_space
from urysel.core.metric import ExtensionRequest, FinMetric
from urysel.core.numeric import FastCauchy, rat, rat_to_str
from urysel.core.urysohn import (
    BookkeepingCursor, LogEntry, UPoint, UrysohnBuilder
)
from urysel.exceptions import ConstructionError, InvalidRequest
from urysel.processes.lift import FiniteFn, LiftedFn, NativeFn
from urysel.processes.selection import Dist


def to_jsonable(obj):
    """Recursively convert values to JSON-compatible structures."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return rat_to_str(obj)
    if isinstance(obj, (float, np.floating)):
        return float('{:.6g}'.format(float(obj)))
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, UPoint):
        return obj.index
    if isinstance(obj, Ball):
        return {'center': obj.center, 'radius': rat_to_str(obj.radius)}
    if isinstance(obj, Cluster):
        return [to_jsonable(b) for b in obj.balls]
    if isinstance(obj, IdealApprox):
        return [to_jsonable(c) for c in obj.chain]
    if isinstance(obj, Dist):
        return {'support_set': to_jsonable(obj.support_set),
                'mass': to_jsonable(obj.masses)}
    if isinstance(obj, FiniteFn):
        return {'domain': to_jsonable(obj.domain),
                'values': to_jsonable(obj.values)}
    if isinstance(obj, ExtensionRequest):
        return request_to_json(obj)
    if isinstance(obj, FinMetric):
        return finmetric_to_json(obj)
    if isinstance(obj, LiftedFn):
        return {'level': obj.level.n, 'phi': to_jsonable(obj.phi)}
    if isinstance(obj, NativeFn):
        return {'native': obj.name}
    if isinstance(obj, FastCauchy):
        return {'space': to_jsonable(obj.space_tag),
                'prefix': to_jsonable(obj.prefix(range(4)))}
    if hasattr(obj, '_asdict'):
        return {k: to_jsonable(v) for k, v in obj._asdict().items()}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in obj]
        if isinstance(obj, (set, frozenset)):
            items.sort(key=lambda v: json.dumps(v, sort_keys=True))
        return items

    raise TypeError("Cannot serialize {!r}".format(obj))


def dumps(report, indent=2):
    """Deterministic UTF-8 JSON text of a report."""
    return json.dumps(to_jsonable(report), sort_keys=True, indent=indent,
                      ensure_ascii=False) + '\n'


def load_json(path):
    with open(path, encoding='utf-8') as fd:
        return json.load(fd)


def request_to_json(req):
    return {'base': list(req.base), 'targets': to_jsonable(req.targets)}


def request_from_json(data):
    return ExtensionRequest(tuple(data['base']),
                            tuple(rat(t) for t in data['targets']))


def finmetric_to_json(metric):
    return {'points': list(metric.points),
            'dist': to_jsonable(metric.matrix())}


def finmetric_from_json(data):
    return FinMetric.from_matrix(
        data['points'], [[rat(v) for v in row] for row in data['dist']]
    )


def builder_to_json(builder):
    return {
        'space': finmetric_to_json(builder.space),
        'log': [
            {'request': request_to_json(entry.request),
             'point': entry.point, 'reused': entry.reused}
            for entry in builder.log
        ],
        'cursor': builder.cursor.as_dict(),
    }


def builder_from_json(data):
    """Restore a builder; the bookkeeping continues where it stopped."""
    space = finmetric_from_json(data['space'])
    if list(space.points) != list(range(space.size)):
        raise InvalidRequest("Builder points must be 0..N-1")
    builder = UrysohnBuilder()
    builder.space = space.subspace(space.points)
    builder.log = [
        LogEntry(request_from_json(e['request']), e['point'], e['reused'])
        for e in data.get('log', [])
    ]
    builder.cursor = BookkeepingCursor.from_dict(data['cursor'])
    return builder


def space_from_json(data, builder=None):
    """Effective space from a document.

    Either ``{"kind": ..., "params": {...}}`` or a bare finite space
    ``{"points": [...], "dist": [[...]]}``.
    """
    if 'kind' not in data:
        return builtin_space('finite', {'metric': finmetric_from_json(data)})
    params = dict(data.get('params', {}))
    kind = data['kind']
    if kind == 'finite' and 'dist' in params:
        params['metric'] = finmetric_from_json(params)
    elif kind == 'urysohn':
        if 'builder' in params:
            params['builder'] = builder_from_json(params['builder'])
        elif builder is not None:
            params['builder'] = builder
    elif params.get('points') is not None:
        params['points'] = [_handle_from_json(p) for p in params['points']]

    return builtin_space(kind, params)


def _handle_from_json(value):
    if isinstance(value, list):
        return tuple(rat(v) for v in value)
    return rat(value)


def point_from_json(data, space):
    """Point of the space's completion.

    ``{"value": "p/q"}`` / ``{"value": ["p/q", ...]}`` is a dense handle,
    ``{"index": i}`` the i-th dense point and ``{"prefix": [[n, "p/q"], ...]}``
    a finite stream prefix (later stages repeat the last approximant).
    """
    if 'index' in data:
        return space.dense_point(int(data['index']))
    if 'value' in data:
        return space.point(_handle_from_json(data['value']))
    if 'prefix' in data:
        stages = sorted((int(n), _handle_from_json(v))
                        for n, v in data['prefix'])
        if not stages:
            raise ConstructionError("Empty point prefix")

        def approx(n):
            value = stages[0][1]
            for level, handle in stages:
                if level > n:
                    break
                value = handle
            return value

        return FastCauchy(approx, space.space_tag)

    raise ConstructionError("Point document needs index, value or prefix")


def clusters_to_json(clusters):
    return [to_jsonable(c) for c in clusters]


def _grid_point(item, space):
    if isinstance(item, dict):
        return point_from_json(item, space)
    return space.point(_handle_from_json(item))


def grid_from_json(data, spaces):
    """Evaluation grid of a base or product domain.

    :param data: list of items or ``{"points": [...]}``; an item is a point
                 document or a plain value, on a product domain a list with
                 one of them per factor
    :param spaces: space of the domain or list of factor spaces

    :return list: points, tuples of points on a product domain
    """
    if not isinstance(spaces, (list, tuple)):
        spaces = [spaces]
    items = data['points'] if isinstance(data, dict) else data
    grid = []
    for item in items:
        if len(spaces) == 1:
            grid.append(_grid_point(item, spaces[0]))
            continue
        if not isinstance(item, list) or len(item) != len(spaces):
            raise ConstructionError(
                "Grid item {} needs {} coordinates".format(item, len(spaces))
            )
        grid.append(tuple(_grid_point(v, s) for v, s in zip(item, spaces)))

    return grid

"""
JSON interchange for etalg objects.

Rationals are written as "num/den" strings (den > 0, reduced); integers
are plain JSON numbers while |x| < 2^53 and strings otherwise. Floats are
refused on input. Every document carries a "schema" tag; parse errors
raise SchemaError with the JSON pointer of the offending value.

Features:
- presentation/v1, closedset/v1, testfn/v1, profile/v1, spectrum/v1
- pattern/v1 (source and target may be supplied by an enclosing chain)
- chain/v1 with dense lists given as profiles or test functions
- cert/v1, rho/v1 and correspondence/v1 on the output side
"""

import json
import re
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from ..algebra.presentation import Presentation
from ..errors import SchemaError
from ..patterns.homs import IntervalTrack, PatternHom, Segment, ThetaTrack
from ..patterns.spectra import FiniteSpectrum
from ..rewriter.chain import ChainSpec, RewriteCertificate
from ..spectrum.closed_sets import ClosedSubset, Piece
from ..spectrum.elements import ProfileElement
from ..spectrum.piecewise import PLMap
from ..spectrum.points import Interior
from ..testfns.functions import TYPE1, TYPE2, TestFunction

SAFE_INT = 2 ** 53
RATIONAL = re.compile(r'^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$')

PRESENTATION = 'presentation/v1'
CLOSEDSET = 'closedset/v1'
TESTFN = 'testfn/v1'
PROFILE = 'profile/v1'
SPECTRUM = 'spectrum/v1'
PATTERN = 'pattern/v1'
CHAIN = 'chain/v1'
CERT = 'cert/v1'


# ---------------------------------------------------------------- rationals

def encode_rational(x: Fraction) -> Any:
    if x.denominator == 1 and abs(x.numerator) < SAFE_INT:
        return x.numerator
    return f"{x.numerator}/{x.denominator}"


def decode_rational(value: Any, pointer: str) -> Fraction:
    """
    Exact rational from a JSON number or "num/den" string.

    Raises:
        SchemaError: for floats, booleans, zero denominators or junk strings
    """
    if isinstance(value, bool):
        raise SchemaError("expected a rational, got a boolean", pointer)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise SchemaError(f"float {value} is not exact; write it as \"num/den\"", pointer)
    if isinstance(value, str):
        match = RATIONAL.match(value)
        if match:
            num, den = int(match.group(1)), int(match.group(2) or 1)
            if den == 0:
                raise SchemaError(f"zero denominator in {value!r}", pointer)
            return Fraction(num, den)
    raise SchemaError(f"expected a rational, got {value!r}", pointer)


def encode(value: Any) -> Any:
    """Turn a report value (dataclasses with to_dict, Fractions, tuples, numpy scalars) into JSON data."""
    if isinstance(value, Fraction):
        return encode_rational(value)
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value if abs(value) < SAFE_INT else f"{value}/1"
    if isinstance(value, float):
        return value
    if isinstance(value, np.generic):
        return encode(value.item())
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [encode(v) for v in items]
    if hasattr(value, 'to_dict'):
        return encode(value.to_dict())
    if isinstance(value, (Presentation, ClosedSubset, PatternHom, ProfileElement, PLMap)):
        return encode(to_document(value))
    raise TypeError(f"cannot encode {type(value).__name__}")


def dumps(value: Any) -> str:
    return json.dumps(encode(value), indent=2, ensure_ascii=False)


def loads(text: str) -> Any:
    """
    Raises:
        SchemaError: if the text is not JSON
    """
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc.msg} at line {exc.lineno}, column {exc.colno}", "/") from exc


# ------------------------------------------------------------------ helpers

def _child(pointer: str, key: Any) -> str:
    token = str(key).replace('~', '~0').replace('/', '~1')
    return f"{pointer.rstrip('/')}/{token}"


def _object(data: Any, pointer: str, schema: Optional[str] = None) -> Dict[str, Any]:
    if not isinstance(data, dict):
        raise SchemaError(f"expected an object, got {type(data).__name__}", pointer)
    if schema is not None and data.get('schema', schema) != schema:
        raise SchemaError(f"expected schema {schema}, got {data.get('schema')!r}", _child(pointer, 'schema'))
    return data


def _field(data: Dict[str, Any], key: str, pointer: str) -> Any:
    if key not in data:
        raise SchemaError(f"missing field {key!r}", _child(pointer, key))
    return data[key]


def _list(value: Any, pointer: str) -> List[Any]:
    if not isinstance(value, list):
        raise SchemaError(f"expected an array, got {type(value).__name__}", pointer)
    return value


def _int(value: Any, pointer: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"expected an integer, got {value!r}", pointer)
    return value


def _ints(value: Any, pointer: str) -> List[int]:
    return [_int(v, _child(pointer, q)) for q, v in enumerate(_list(value, pointer))]


def _matrix(value: Any, pointer: str) -> List[List[int]]:
    return [_ints(row, _child(pointer, i)) for i, row in enumerate(_list(value, pointer))]


def _rationals(value: Any, pointer: str) -> List[Fraction]:
    return [decode_rational(v, _child(pointer, q)) for q, v in enumerate(_list(value, pointer))]


def _array_of(value: Any, pointer: str, parse: Callable[[Any, str], Any]) -> List[Any]:
    return [parse(v, _child(pointer, q)) for q, v in enumerate(_list(value, pointer))]


def _checked(build: Callable[[], Any], pointer: str) -> Any:
    """Constructors raise ValueError on out-of-range data; report it at pointer."""
    try:
        return build()
    except SchemaError:
        raise
    except (ValueError, TypeError) as exc:
        raise SchemaError(str(exc), pointer) from exc


# ----------------------------------------------------------------- parsers

def parse_presentation(data: Any, pointer: str = "") -> Presentation:
    obj = _object(data, pointer, PRESENTATION)
    unital = obj.get('unital', True)
    if not isinstance(unital, bool):
        raise SchemaError("unital must be a boolean", _child(pointer, 'unital'))
    return Presentation(
        k=tuple(_ints(_field(obj, 'k', pointer), _child(pointer, 'k'))),
        dims=tuple(_ints(_field(obj, 'dims', pointer), _child(pointer, 'dims'))),
        alpha=_matrix(_field(obj, 'alpha', pointer), _child(pointer, 'alpha')),
        beta=_matrix(_field(obj, 'beta', pointer), _child(pointer, 'beta')),
        unital=unital,
    )


def _piece(value: Any, pointer: str) -> Piece:
    if isinstance(value, dict):
        lo = decode_rational(_field(value, 'lo', pointer), _child(pointer, 'lo'))
        hi = decode_rational(_field(value, 'hi', pointer), _child(pointer, 'hi'))
    else:
        pair = _list(value, pointer)
        if len(pair) != 2:
            raise SchemaError("a piece is a [lo, hi] pair", pointer)
        lo, hi = decode_rational(pair[0], _child(pointer, 0)), decode_rational(pair[1], _child(pointer, 1))
    return _checked(lambda: Piece(lo, hi), pointer)


def parse_closedset(data: Any, pointer: str = "") -> ClosedSubset:
    obj = _object(data, pointer, CLOSEDSET)
    thetas = _ints(obj.get('thetas', []), _child(pointer, 'thetas'))
    blocks_ptr = _child(pointer, 'pieces')
    blocks = [_array_of(blk, _child(blocks_ptr, i), _piece)
              for i, blk in enumerate(_list(_field(obj, 'pieces', pointer), blocks_ptr))]
    return ClosedSubset.build(thetas, blocks)


def parse_testfn(data: Any, pointer: str = "") -> TestFunction:
    obj = _object(data, pointer, TESTFN)
    kind = _field(obj, 'kind', pointer)
    m = _int(_field(obj, 'm', pointer), _child(pointer, 'm'))
    lift = obj.get('lift')
    if lift is not None:
        lift = tuple(_ints(lift, _child(pointer, 'lift')))
        if len(lift) != 2:
            raise SchemaError("lift is an (s, s') pair", _child(pointer, 'lift'))
    if kind == TYPE1:
        return TestFunction(TYPE1, m, j=_int(_field(obj, 'j', pointer), _child(pointer, 'j')),
                            a=tuple(_ints(_field(obj, 'a', pointer), _child(pointer, 'a'))),
                            b=tuple(_ints(_field(obj, 'b', pointer), _child(pointer, 'b'))), lift=lift)
    if kind == TYPE2:
        X = _array_of(_field(obj, 'X', pointer), _child(pointer, 'X'), _piece)
        return TestFunction(TYPE2, m, i=_int(_field(obj, 'i', pointer), _child(pointer, 'i')),
                            X=tuple(X), lift=lift)
    raise SchemaError(f"unknown test function kind {kind!r}", _child(pointer, 'kind'))


def parse_plmap(value: Any, pointer: str) -> PLMap:
    points = []
    for q, pair in enumerate(_list(value, pointer)):
        ptr = _child(pointer, q)
        pair = _list(pair, ptr)
        if len(pair) != 2:
            raise SchemaError("a breakpoint is an [x, y] pair", ptr)
        points.append((decode_rational(pair[0], _child(ptr, 0)), decode_rational(pair[1], _child(ptr, 1))))
    return _checked(lambda: PLMap(points), pointer)


def parse_profile(data: Any, pointer: str = "") -> ProfileElement:
    obj = _object(data, pointer, PROFILE)
    theta_ptr = _child(pointer, 'theta_eigs')
    theta = [_rationals(vs, _child(theta_ptr, j)) for j, vs in enumerate(_list(_field(obj, 'theta_eigs', pointer), theta_ptr))]
    branch_ptr = _child(pointer, 'branches')
    branches = [_array_of(blk, _child(branch_ptr, i), parse_plmap)
                for i, blk in enumerate(_list(_field(obj, 'branches', pointer), branch_ptr))]
    return ProfileElement(tuple(tuple(vs) for vs in theta), tuple(tuple(b) for b in branches), name=obj.get('name', ""))


def parse_element(data: Any, pointer: str, P: Presentation) -> ProfileElement:
    """A dense-list entry: a profile/v1 or a testfn/v1 turned into its profile."""
    obj = _object(data, pointer)
    if obj.get('schema') == TESTFN:
        return parse_testfn(obj, pointer).to_profile(P)
    return parse_profile(obj, pointer)


def parse_spectrum(data: Any, pointer: str = "") -> FiniteSpectrum:
    obj = _object(data, pointer, SPECTRUM)
    interior = []
    ptr = _child(pointer, 'interior')
    for q, y in enumerate(_list(obj.get('interior', []), ptr)):
        yp = _child(ptr, q)
        y = _object(y, yp)
        i = _int(_field(y, 'i', yp), _child(yp, 'i'))
        t = decode_rational(_field(y, 't', yp), _child(yp, 't'))
        interior.append(_checked(lambda: Interior(i, t), yp))
    return FiniteSpectrum(
        tuple(_ints(_field(obj, 'theta_mult', pointer), _child(pointer, 'theta_mult'))),
        tuple(interior),
        _int(obj.get('zero_pad', 0), _child(pointer, 'zero_pad')),
    )


def _track(value: Any, pointer: str):
    obj = _object(value, pointer)
    if 'theta' in obj:
        return ThetaTrack(_int(obj['theta'], _child(pointer, 'theta')))
    return IntervalTrack(_int(_field(obj, 'block', pointer), _child(pointer, 'block')),
                         parse_plmap(_field(obj, 'map', pointer), _child(pointer, 'map')))


def _segment(value: Any, pointer: str) -> Segment:
    obj = _object(value, pointer)
    lo = decode_rational(_field(obj, 'lo', pointer), _child(pointer, 'lo'))
    hi = decode_rational(_field(obj, 'hi', pointer), _child(pointer, 'hi'))
    tracks = _array_of(obj.get('tracks', []), _child(pointer, 'tracks'), _track)
    pad = _int(obj.get('pad', 0), _child(pointer, 'pad'))
    return _checked(lambda: Segment(lo, hi, tuple(tracks), pad), pointer)


def parse_pattern(data: Any, pointer: str = "", source: Optional[Presentation] = None,
                  target: Optional[Presentation] = None) -> PatternHom:
    """
    A pattern; inside a chain the source and target come from the stages.

    The domain defaults to the full spectrum of the target.
    """
    obj = _object(data, pointer, PATTERN)
    if 'source' in obj:
        source = parse_presentation(obj['source'], _child(pointer, 'source'))
    if 'target' in obj:
        target = parse_presentation(obj['target'], _child(pointer, 'target'))
    if source is None or target is None:
        raise SchemaError("pattern needs a source and a target", pointer)
    if 'domain' in obj:
        domain = parse_closedset(obj['domain'], _child(pointer, 'domain'))
    else:
        domain = ClosedSubset(frozenset(range(target.p)), tuple((Piece(0, 1),) for _ in range(target.l)))
    vptr = _child(pointer, 'vertex_spec')
    vertex = {}
    for key, spec in _object(obj.get('vertex_spec', {}), vptr).items():
        if not key.lstrip('-').isdigit():
            raise SchemaError(f"vertex key {key!r} is not an index", _child(vptr, key))
        vertex[int(key)] = parse_spectrum(spec, _child(vptr, key))
    sptr = _child(pointer, 'segments')
    segments = [_array_of(blk, _child(sptr, i), _segment)
                for i, blk in enumerate(_list(_field(obj, 'segments', pointer), sptr))]
    return PatternHom(source, target, domain, vertex, tuple(tuple(b) for b in segments), name=obj.get('name', ""))


def parse_chain(data: Any, pointer: str = "") -> ChainSpec:
    """
    chain/v1: stages, maps between consecutive stages, dense lists and an
    optional decreasing eps schedule.
    """
    obj = _object(data, pointer, CHAIN)
    stages = _array_of(_field(obj, 'stages', pointer), _child(pointer, 'stages'), parse_presentation)
    mptr = _child(pointer, 'maps')
    raw_maps = _list(_field(obj, 'maps', pointer), mptr)
    if len(raw_maps) != max(len(stages) - 1, 0):
        raise SchemaError(f"{len(stages)} stages need {len(stages) - 1} maps", mptr)
    maps = [parse_pattern(m, _child(mptr, n), stages[n], stages[n + 1]) for n, m in enumerate(raw_maps)]
    dptr = _child(pointer, 'dense_sets')
    raw_dense = _list(obj.get('dense_sets', [[] for _ in stages]), dptr)
    if len(raw_dense) != len(stages):
        raise SchemaError(f"{len(stages)} stages need {len(stages)} dense lists", dptr)
    dense = [[parse_element(f, _child(_child(dptr, n), q), stages[n]) for q, f in enumerate(_list(fs, _child(dptr, n)))]
             for n, fs in enumerate(raw_dense)]
    eps = _rationals(obj['eps'], _child(pointer, 'eps')) if 'eps' in obj else None
    return ChainSpec(stages, maps, dense, eps)


# ----------------------------------------------------------------- emitters

def presentation_to_dict(P: Presentation) -> Dict[str, Any]:
    return {'schema': PRESENTATION, 'k': list(P.k), 'dims': list(P.dims),
            'alpha': [list(r) for r in P.alpha], 'beta': [list(r) for r in P.beta], 'unital': P.unital}


def closedset_to_dict(S: ClosedSubset) -> Dict[str, Any]:
    return {'schema': CLOSEDSET, 'thetas': sorted(S.thetas),
            'pieces': [[[p.lo, p.hi] for p in blk] for blk in S.pieces]}


def plmap_to_list(f: PLMap) -> List[List[Fraction]]:
    return [[x, y] for x, y in f.points]


def profile_to_dict(f: ProfileElement) -> Dict[str, Any]:
    payload = {'schema': PROFILE, 'theta_eigs': [list(vs) for vs in f.theta_eigs],
               'branches': [[plmap_to_list(b) for b in blk] for blk in f.branches]}
    if f.name:
        payload['name'] = f.name
    return payload


def _track_to_dict(tr) -> Dict[str, Any]:
    if isinstance(tr, ThetaTrack):
        return {'theta': tr.j}
    return {'block': tr.i, 'map': plmap_to_list(tr.f)}


def pattern_to_dict(phi: PatternHom, with_ends: bool = True) -> Dict[str, Any]:
    payload: Dict[str, Any] = {'schema': PATTERN}
    if phi.name:
        payload['name'] = phi.name
    if with_ends:
        payload['source'] = presentation_to_dict(phi.source)
        payload['target'] = presentation_to_dict(phi.target)
    payload['domain'] = closedset_to_dict(phi.domain)
    payload['vertex_spec'] = {str(j): phi.vertex_spec[j].to_dict() for j in sorted(phi.vertex_spec)}
    payload['segments'] = [
        [{'lo': seg.lo, 'hi': seg.hi, 'pad': seg.pad, 'tracks': [_track_to_dict(t) for t in seg.tracks]}
         for seg in blk]
        for blk in phi.segments
    ]
    return payload


def chain_to_dict(spec: ChainSpec) -> Dict[str, Any]:
    return {
        'schema': CHAIN,
        'stages': [presentation_to_dict(P) for P in spec.stages],
        'maps': [pattern_to_dict(phi, with_ends=False) for phi in spec.maps],
        'dense_sets': [[profile_to_dict(f) for f in fs] for fs in spec.dense_sets],
        'eps': list(spec.eps_schedule),
    }


def certificate_to_dict(cert: RewriteCertificate, seed: Optional[int] = None) -> Dict[str, Any]:
    """cert/v1: the rewritten chain, its embeddings and every audit table."""
    return {
        'schema': CERT,
        'seed': seed,
        'images': [closedset_to_dict(X) for X in cert.images],
        'image_stages': [presentation_to_dict(r.B) for r in cert.image_stages],
        'stages': [presentation_to_dict(B) for B in cert.new_stages],
        'maps': [pattern_to_dict(psi, with_ends=False) for psi in cert.maps],
        'embeddings': [pattern_to_dict(e, with_ends=False) for e in cert.embeddings],
        'tables': cert.tables(),
    }


def to_document(value: Any) -> Dict[str, Any]:
    """The schema-tagged document of a parsed object."""
    if isinstance(value, Presentation):
        return presentation_to_dict(value)
    if isinstance(value, ClosedSubset):
        return closedset_to_dict(value)
    if isinstance(value, PatternHom):
        return pattern_to_dict(value)
    if isinstance(value, ProfileElement):
        return profile_to_dict(value)
    if isinstance(value, PLMap):
        return {'map': plmap_to_list(value)}
    raise TypeError(f"no document form for {type(value).__name__}")


PARSERS: Dict[str, Callable[..., Any]] = {
    PRESENTATION: parse_presentation,
    CLOSEDSET: parse_closedset,
    TESTFN: parse_testfn,
    PROFILE: parse_profile,
    SPECTRUM: parse_spectrum,
    PATTERN: parse_pattern,
    CHAIN: parse_chain,
}


def parse_document(data: Any, expected: Optional[Sequence[str]] = None) -> Any:
    """
    Dispatch on the "schema" tag.

    Raises:
        SchemaError: for unknown or unexpected schemas
    """
    obj = _object(data, "")
    schema = obj.get('schema')
    if schema not in PARSERS:
        raise SchemaError(f"unknown schema {schema!r}", "/schema")
    if expected is not None and schema not in expected:
        raise SchemaError(f"expected one of {list(expected)}, got {schema}", "/schema")
    return PARSERS[schema](obj, "")

"""The map description language: syntax tree, parser, type binding and the
canonical printer.

Grammar:

    <MAP>  -> NAME [ '{' <ARGS> '}' ]
    <ARGS> -> [ <ARG> { ',' <ARG> }* ]
    <ARG>  -> [ KEY '=' ] ( <MAP> | LITERAL )

A literal runs up to the next `,` or `}` that is not nested inside brackets,
and may be quoted. Parsing happens in two passes: the text is read into an
untyped call tree, then the tree is bound to concrete source and target
groups, which is where element literals are read and families are checked
against the groups they are applied to.
"""
from __future__ import annotations
import re

from dataclasses import dataclass, field
from typing import ClassVar, Dict, List, Optional, Tuple, Union

import coarse_maps.words as wd
from coarse_maps.errors import MalformedInputError, MapSyntaxError, MapTypeError
from coarse_maps.groups import (
    CyclicGroup,
    Elem,
    FreeGroup,
    Group,
    IntegerGroup,
    parse_group,
)


# Syntax tree

@dataclass(frozen=True)
class MapSpec:
    """Base class of every map family node. Subclasses validate in
    `__post_init__` that the node is well typed."""
    source: Group
    target: Group
    family: ClassVar[str] = ''

    def __post_init__(self):
        if not isinstance(self.source, Group) or not isinstance(self.target, Group):
            raise TypeError('source and target must be groups')

    def __str__(self) -> str:
        return format_map(self)

    def _check_base(self, base: MapSpec):
        if not isinstance(base, MapSpec):
            raise TypeError(f'{self.family}: base must be a MapSpec')
        if base.source != self.source or base.target != self.target:
            raise MapTypeError(
                f'{self.family}: base is {base.source}->{base.target}, '
                f'expected {self.source}->{self.target}')


@dataclass(frozen=True)
class Identity(MapSpec):
    family: ClassVar[str] = 'id'

    def __post_init__(self):
        super().__post_init__()
        if self.source != self.target:
            raise MapTypeError(f'id needs equal source and target, got {self.source}->{self.target}')


@dataclass(frozen=True)
class Constant(MapSpec):
    c: Elem
    family: ClassVar[str] = 'const'

    def __post_init__(self):
        super().__post_init__()
        self.target.check(self.c, 'constant')


@dataclass(frozen=True)
class Hom(MapSpec):
    """A homomorphism given by the images of the generators: one image per
    free generator, or the image of 1 for ℤ and cyclic sources."""
    images: Tuple[Elem, ...]
    family: ClassVar[str] = 'hom'

    def __post_init__(self):
        super().__post_init__()
        if isinstance(self.source, FreeGroup):
            expected = self.source.rank
        elif isinstance(self.source, (IntegerGroup, CyclicGroup)):
            expected = 1
        else:
            raise MapTypeError(f'hom needs a free, ℤ or cyclic source, got {self.source}')
        if len(self.images) != expected:
            raise MapTypeError(f'hom on {self.source} needs {expected} images')
        for image in self.images:
            self.target.check(image, 'hom image')
        if isinstance(self.source, CyclicGroup):
            image = self.images[0]
            if self.target.power(image, self.source.modulus) != self.target.identity():
                raise MapTypeError(f'hom: the order of {self.target.format_element(image)} '
                                   f'does not divide {self.source.modulus}')


@dataclass(frozen=True)
class Brooks(MapSpec):
    """Counts occurrences of `word` minus occurrences of its inverse."""
    word: wd.Word
    family: ClassVar[str] = 'brooks'

    def __post_init__(self):
        super().__post_init__()
        if not isinstance(self.source, FreeGroup):
            raise MapTypeError(f'brooks requires a free source, got {self.source}')
        if not isinstance(self.target, IntegerGroup):
            raise MapTypeError(f'brooks requires target z, got {self.target}')
        self.source.check(self.word, 'brooks word')
        if self.word.is_identity():
            raise MapTypeError('brooks needs a non-empty word')


def _check_integer_map(spec: MapSpec):
    if not isinstance(spec.source, IntegerGroup) or not isinstance(spec.target, IntegerGroup):
        raise MapTypeError(f'{spec.family} is a map z->z, got {spec.source}->{spec.target}')


def _check_integers(family: str, **values):
    for name, value in values.items():
        if not isinstance(value, int) or isinstance(value, bool):
            raise TypeError(f'{family}: {name} must be an integer')


@dataclass(frozen=True)
class FloorScale(MapSpec):
    """n ↦ ⌊pn/q⌋."""
    p: int
    q: int
    family: ClassVar[str] = 'floor_scale'

    def __post_init__(self):
        super().__post_init__()
        _check_integer_map(self)
        _check_integers(self.family, p=self.p, q=self.q)
        if self.q <= 0:
            raise MapTypeError(f'{self.family}: q must be positive')


@dataclass(frozen=True)
class Monomial(MapSpec):
    """n ↦ n^d."""
    degree: int
    family: ClassVar[str] = 'monomial'

    def __post_init__(self):
        super().__post_init__()
        _check_integer_map(self)
        _check_integers(self.family, degree=self.degree)
        if self.degree < 0:
            raise MapTypeError('monomial: degree must be non-negative')


@dataclass(frozen=True)
class FloorQuad(MapSpec):
    """n ↦ ⌊pn²/q⌋."""
    p: int
    q: int
    family: ClassVar[str] = 'floor_quad'

    def __post_init__(self):
        super().__post_init__()
        _check_integer_map(self)
        _check_integers(self.family, p=self.p, q=self.q)
        if self.q <= 0:
            raise MapTypeError(f'{self.family}: q must be positive')


@dataclass(frozen=True)
class Perturb(MapSpec):
    """g ↦ φ(g)c."""
    base: MapSpec
    c: Elem
    family: ClassVar[str] = 'perturb'

    def __post_init__(self):
        super().__post_init__()
        self._check_base(self.base)
        self.target.check(self.c, 'perturbation constant')


@dataclass(frozen=True)
class Shift(MapSpec):
    """g ↦ φ(ga)."""
    base: MapSpec
    a: Elem
    family: ClassVar[str] = 'shift'

    def __post_init__(self):
        super().__post_init__()
        self._check_base(self.base)
        self.source.check(self.a, 'shift')


@dataclass(frozen=True)
class Unitalize(MapSpec):
    """g ↦ φ(g)φ(1)⁻¹."""
    base: MapSpec
    family: ClassVar[str] = 'unitalize'

    def __post_init__(self):
        super().__post_init__()
        self._check_base(self.base)


@dataclass(frozen=True)
class Compose(MapSpec):
    """g ↦ outer(inner(g))."""
    outer: MapSpec
    inner: MapSpec
    family: ClassVar[str] = 'compose'

    def __post_init__(self):
        super().__post_init__()
        if self.inner.source != self.source or self.outer.target != self.target:
            raise MapTypeError(f'compose: ends do not match {self.source}->{self.target}')
        if self.inner.target != self.outer.source:
            raise MapTypeError(f'compose: inner target {self.inner.target} does not match '
                               f'outer source {self.outer.source}')


@dataclass(frozen=True)
class ZQuad(MapSpec):
    """The sequence on ℤ generated from φ(1)=a and φ(2)=b by the quadratic
    recursion."""
    a: Elem
    b: Elem
    family: ClassVar[str] = 'zquad'

    def __post_init__(self):
        super().__post_init__()
        if not isinstance(self.source, IntegerGroup):
            raise MapTypeError(f'zquad requires source z, got {self.source}')
        self.target.check(self.a, 'zquad a')
        self.target.check(self.b, 'zquad b')


@dataclass(frozen=True)
class RandomMap(MapSpec):
    """Seeded pseudo-random unital map, supported on the source ball of
    radius `dom_radius` with values in the target ball of radius `tgt_radius`."""
    seed: int
    dom_radius: int
    tgt_radius: int
    family: ClassVar[str] = 'random'

    def __post_init__(self):
        super().__post_init__()
        _check_integers(self.family, seed=self.seed, domR=self.dom_radius, tgtR=self.tgt_radius)
        if self.dom_radius < 0 or self.tgt_radius < 0:
            raise MapTypeError('random: radii must be non-negative')


@dataclass(frozen=True)
class Jitter(MapSpec):
    """g ↦ φ(g)r(g) where r is a seeded pseudo-random map into the target
    ball of radius `tgt_radius` with r(1) = 1."""
    base: MapSpec
    seed: int
    tgt_radius: int
    family: ClassVar[str] = 'jitter'

    def __post_init__(self):
        super().__post_init__()
        self._check_base(self.base)
        _check_integers(self.family, seed=self.seed, tgtR=self.tgt_radius)
        if self.tgt_radius < 0:
            raise MapTypeError('jitter: tgtR must be non-negative')


@dataclass(frozen=True)
class Recenter(MapSpec):
    """g ↦ φ(ga⁻¹)b, the map whose graph is the right translate of the graph
    of φ by (a, b)."""
    base: MapSpec
    a: Elem
    b: Elem
    family: ClassVar[str] = 'recenter'

    def __post_init__(self):
        super().__post_init__()
        self._check_base(self.base)
        self.source.check(self.a, 'recenter a')
        self.target.check(self.b, 'recenter b')


@dataclass(frozen=True)
class Diff(MapSpec):
    """The difference x ↦ φ(gx)φ(x)⁻¹."""
    base: MapSpec
    g: Elem
    family: ClassVar[str] = 'diff'

    def __post_init__(self):
        super().__post_init__()
        self._check_base(self.base)
        self.source.check(self.g, 'difference shift')


# Untyped call tree

@dataclass
class _Call:
    name: str
    position: int
    args: List[_Arg] = field(default_factory=list)


@dataclass
class _Arg:
    key: Optional[str]
    value: Union[_Call, str]
    position: int


# parameter names per family, in positional order
FAMILIES: Dict[str, Tuple[str, ...]] = {
    'id': (),
    'const': ('c',),
    'hom': (),
    'brooks': ('w',),
    'floor_scale': ('p', 'q'),
    'monomial': ('d',),
    'floor_quad': ('p', 'q'),
    'perturb': ('base', 'c'),
    'shift': ('base', 'a'),
    'unitalize': ('base',),
    'compose': ('outer', 'inner', 'via'),
    'zquad': ('a', 'b'),
    'random': ('seed', 'domR', 'tgtR'),
    'jitter': ('base', 'seed', 'tgtR'),
    'recenter': ('base', 'a', 'b'),
    'diff': ('base', 'g'),
}
OPTIONAL_PARAMETERS = {'compose': ('via',)}
MAP_PARAMETERS = ('base', 'outer', 'inner')

_NAME = re.compile(r'[A-Za-z_][A-Za-z0-9_]*')
_KEY = re.compile(r'([A-Za-z_][A-Za-z0-9_]*)\s*=(?!>)')
_CALL = re.compile(r'[A-Za-z_][A-Za-z0-9_]*\s*\{')


class _Parser:
    """Recursive descent over the characters of a map description."""

    def __init__(self, text: str):
        self.text = text
        self.position = 0

    def parse(self) -> _Call:
        call = self._map()
        self._skip()
        if self.position != len(self.text):
            raise MapSyntaxError(f'unexpected {self.text[self.position]!r}', self.position)
        return call

    def _skip(self):
        while self.position < len(self.text) and self.text[self.position].isspace():
            self.position += 1

    def peek(self, char: str) -> bool:
        self._skip()
        return self.text.startswith(char, self.position)

    def accept(self, char: str) -> bool:
        if self.peek(char):
            self.position += len(char)
            return True
        return False

    def expect(self, char: str):
        if not self.accept(char):
            found = self.text[self.position] if self.position < len(self.text) else 'end of input'
            raise MapSyntaxError(f'expected {char!r}, found {found!r}', self.position)

    # <MAP> -> NAME [ '{' <ARGS> '}' ]
    def _map(self) -> _Call:
        self._skip()
        start = self.position
        match = _NAME.match(self.text, start)
        if not match:
            raise MapSyntaxError('expected a family name', start)
        name = match.group(0)
        if name not in FAMILIES:
            raise MapSyntaxError(f'unknown map family {name!r}', start)
        self.position = match.end()
        call = _Call(name, start)
        if self.accept('{'):
            call.args = self._args()
            self.expect('}')
        return call

    # <ARGS> -> [ <ARG> { ',' <ARG> }* ]
    def _args(self) -> List[_Arg]:
        if self.peek('}'):
            return []
        args = [self._arg()]
        while self.accept(','):
            args.append(self._arg())
        return args

    # <ARG> -> [ KEY '=' ] ( <MAP> | LITERAL )
    def _arg(self) -> _Arg:
        self._skip()
        start = self.position
        key = None
        match = _KEY.match(self.text, self.position)
        if match:
            key = match.group(1)
            self.position = match.end()
            self._skip()
        if _CALL.match(self.text, self.position):
            return _Arg(key, self._map(), start)
        literal_start = self.position
        literal = self._literal()
        if literal in FAMILIES:
            return _Arg(key, _Call(literal, literal_start), start)
        return _Arg(key, literal, start)

    def _literal(self) -> str:
        self._skip()
        if self.position < len(self.text) and self.text[self.position] in '"\'':
            quote = self.text[self.position]
            end = self.text.find(quote, self.position + 1)
            if end < 0:
                raise MapSyntaxError('unterminated quote', self.position)
            literal = self.text[self.position + 1:end]
            self.position = end + 1
            return literal
        depth, start = 0, self.position
        while self.position < len(self.text):
            char = self.text[self.position]
            if char in '([':
                depth += 1
            elif char in ')]':
                depth -= 1
                if depth < 0:
                    raise MapSyntaxError(f'unbalanced {char!r}', self.position)
            elif char in ',}' and depth == 0:
                break
            elif char == '{':
                raise MapSyntaxError("unexpected '{'", self.position)
            self.position += 1
        if depth:
            raise MapSyntaxError('unbalanced brackets', start)
        return self.text[start:self.position].strip()


def _arguments(call: _Call) -> Dict[str, _Arg]:
    """Matches positional and keyword arguments against the family's
    parameter list."""
    names = FAMILIES[call.name]
    optional = OPTIONAL_PARAMETERS.get(call.name, ())
    bound: Dict[str, _Arg] = {}
    positional = True
    for i, arg in enumerate(call.args):
        if arg.key is None:
            if not positional:
                raise MapSyntaxError('positional argument after keyword argument', arg.position)
            if i >= len(names):
                raise MapSyntaxError(f'{call.name} takes at most {len(names)} arguments',
                                     arg.position)
            name = names[i]
        else:
            positional = False
            name = arg.key
            if name not in names:
                raise MapSyntaxError(f'{call.name} has no parameter {name!r}', arg.position)
        if name in bound:
            raise MapSyntaxError(f'{call.name}: parameter {name!r} given twice', arg.position)
        bound[name] = arg
    for name in names:
        if name not in bound and name not in optional:
            raise MapSyntaxError(f'{call.name}: missing parameter {name!r}', call.position)
    return bound


def _text(arg: _Arg) -> str:
    if isinstance(arg.value, _Call):
        if arg.value.args:
            raise MapSyntaxError('expected a literal, found a map', arg.position)
        return arg.value.name
    return arg.value


def _call(arg: _Arg) -> _Call:
    if not isinstance(arg.value, _Call):
        raise MapSyntaxError(f'expected a map, found {arg.value!r}', arg.position)
    return arg.value


def _integer(arg: _Arg) -> int:
    try:
        return int(_text(arg))
    except ValueError as exc:
        raise MapSyntaxError(f'expected an integer, found {_text(arg)!r}', arg.position) from exc


def _element(arg: _Arg, group: Group) -> Elem:
    try:
        return group.parse_element(_text(arg))
    except MalformedInputError as exc:
        raise MapSyntaxError(f'bad element literal for {group}: {exc}', arg.position) from exc


def _group(arg: _Arg) -> Group:
    try:
        return parse_group(_text(arg))
    except MalformedInputError as exc:
        raise MapSyntaxError(str(exc), arg.position) from exc


def _hom_entries(call: _Call) -> List[Tuple[str, str, int]]:
    entries = []
    for arg in call.args:
        text = _text(arg)
        if arg.key is not None or '->' not in text:
            raise MapSyntaxError('hom entries look like g->w', arg.position)
        generator, _, image = text.partition('->')
        entries.append((generator.strip(), image.strip().strip('"\''), arg.position))
    return entries


# Type inference

def _free_rank(letters: str) -> int:
    indices = [ord(char.lower()) - ord('a') + 1 for char in letters if char.isalpha()]
    return max([2] + indices)


def _natural(call: _Call) -> Tuple[Optional[Group], Optional[Group]]:
    """The source and target a family implies on its own, where it implies any."""
    # pylint: disable=too-many-return-statements
    name = call.name
    if name in ('floor_scale', 'monomial', 'floor_quad'):
        return IntegerGroup(), IntegerGroup()
    if name == 'brooks':
        return FreeGroup(_free_rank(_text(_arguments(call)['w']))), IntegerGroup()
    if name == 'zquad':
        return IntegerGroup(), None
    if name == 'hom':
        generators = [generator for generator, _, _ in _hom_entries(call)]
        if generators and all(generator == '1' for generator in generators):
            return IntegerGroup(), None
        if generators:
            return FreeGroup(_free_rank(''.join(generators))), None
        return None, None
    if name in ('perturb', 'shift', 'unitalize', 'jitter', 'recenter', 'diff'):
        return _natural(_call(_arguments(call)['base']))
    if name == 'compose':
        args = _arguments(call)
        return _natural(_call(args['inner']))[0], _natural(_call(args['outer']))[1]
    return None, None


def _middle(args: Dict[str, _Arg], source: Group) -> Group:
    if 'via' in args:
        return _group(args['via'])
    inner_target = _natural(_call(args['inner']))[1]
    if inner_target is not None:
        return inner_target
    outer_source = _natural(_call(args['outer']))[0]
    if outer_source is not None:
        return outer_source
    return source


# Binding

def _bind(call: _Call, source: Group, target: Group) -> MapSpec:
    # pylint: disable=too-many-return-statements,too-many-branches
    name = call.name
    if name == 'hom':
        return _bind_hom(call, source, target)
    args = _arguments(call)
    if name == 'id':
        return Identity(source, target)
    if name == 'const':
        return Constant(source, target, _element(args['c'], target))
    if name == 'brooks':
        if not isinstance(source, FreeGroup):
            raise MapTypeError(f'brooks requires a free source, got {source}')
        return Brooks(source, target, _element(args['w'], source))
    if name == 'floor_scale':
        return FloorScale(source, target, _integer(args['p']), _integer(args['q']))
    if name == 'monomial':
        return Monomial(source, target, _integer(args['d']))
    if name == 'floor_quad':
        return FloorQuad(source, target, _integer(args['p']), _integer(args['q']))
    if name == 'zquad':
        return ZQuad(source, target, _element(args['a'], target), _element(args['b'], target))
    if name == 'random':
        return RandomMap(source, target, _integer(args['seed']),
                         _integer(args['domR']), _integer(args['tgtR']))
    if name == 'compose':
        middle = _middle(args, source)
        inner = _bind(_call(args['inner']), source, middle)
        outer = _bind(_call(args['outer']), middle, target)
        return Compose(source, target, outer, inner)

    base = _bind(_call(args['base']), source, target)
    if name == 'perturb':
        return Perturb(source, target, base, _element(args['c'], target))
    if name == 'shift':
        return Shift(source, target, base, _element(args['a'], source))
    if name == 'unitalize':
        return Unitalize(source, target, base)
    if name == 'jitter':
        return Jitter(source, target, base, _integer(args['seed']), _integer(args['tgtR']))
    if name == 'recenter':
        return Recenter(source, target, base,
                        _element(args['a'], source), _element(args['b'], target))
    if name == 'diff':
        return Diff(source, target, base, _element(args['g'], source))
    raise MapSyntaxError(f'unknown map family {name!r}', call.position)


def _bind_hom(call: _Call, source: Group, target: Group) -> Hom:
    entries = _hom_entries(call)
    if isinstance(source, FreeGroup):
        images = [target.identity()] * source.rank
        for generator, image, position in entries:
            try:
                letter = wd.parse_word(generator, source.rank)
            except MalformedInputError as exc:
                raise MapTypeError(f'hom: {generator!r} is not a generator of {source}') from exc
            if len(letter.letters) != 1 or letter.letters[0] < 0:
                raise MapTypeError(f'hom: {generator!r} is not a generator of {source}')
            images[letter.letters[0] - 1] = _element(_Arg(None, image, position), target)
        return Hom(source, target, tuple(images))
    if isinstance(source, (IntegerGroup, CyclicGroup)):
        if len(entries) != 1 or entries[0][0] != '1':
            raise MapTypeError(f'hom on {source} takes exactly one entry 1->w')
        _, image, position = entries[0]
        return Hom(source, target, (_element(_Arg(None, image, position), target),))
    raise MapTypeError(f'hom needs a free, z or cyclic source, got {source}')


def parse_map(text: str, source: Group = None, target: Group = None) -> MapSpec:
    """Parses and binds a map description. When `source` is omitted it is
    inferred from the families used; when `target` is omitted it is inferred
    the same way and defaults to the source."""
    call = _Parser(text).parse()
    natural_source, natural_target = _natural(call)
    source = source or natural_source
    if source is None:
        raise MapTypeError(f'cannot infer the source group of {text!r}; pass a group')
    target = target or natural_target or source
    return _bind(call, source, target)


# Canonical printer

def _literal(group: Group, x: Elem) -> str:
    return group.format_element(x) or '1'


def format_map(spec: MapSpec) -> str:
    """Canonical text of a spec. parse_map(format_map(s), s.source, s.target)
    returns a spec equal to s."""
    # pylint: disable=too-many-return-statements
    source, target = spec.source, spec.target
    if isinstance(spec, Identity):
        return 'id'
    if isinstance(spec, Constant):
        return f'const{{{_literal(target, spec.c)}}}'
    if isinstance(spec, Hom):
        if isinstance(source, FreeGroup):
            entries = [f'{wd.format_word(source.generator(i + 1))}->{_literal(target, image)}'
                       for i, image in enumerate(spec.images)]
        else:
            entries = [f'1->{_literal(target, spec.images[0])}']
        return f'hom{{{",".join(entries)}}}'
    if isinstance(spec, Brooks):
        return f'brooks{{{wd.format_word(spec.word)}}}'
    if isinstance(spec, (FloorScale, FloorQuad)):
        return f'{spec.family}{{{spec.p},{spec.q}}}'
    if isinstance(spec, Monomial):
        return f'monomial{{{spec.degree}}}'
    if isinstance(spec, Perturb):
        return f'perturb{{{format_map(spec.base)},c={_literal(target, spec.c)}}}'
    if isinstance(spec, Shift):
        return f'shift{{{format_map(spec.base)},a={_literal(source, spec.a)}}}'
    if isinstance(spec, Unitalize):
        return f'unitalize{{{format_map(spec.base)}}}'
    if isinstance(spec, Compose):
        return (f'compose{{{format_map(spec.outer)},{format_map(spec.inner)},'
                f'via={spec.inner.target.spec}}}')
    if isinstance(spec, ZQuad):
        return f'zquad{{{_literal(target, spec.a)},{_literal(target, spec.b)}}}'
    if isinstance(spec, RandomMap):
        return f'random{{seed={spec.seed},domR={spec.dom_radius},tgtR={spec.tgt_radius}}}'
    if isinstance(spec, Jitter):
        return f'jitter{{{format_map(spec.base)},seed={spec.seed},tgtR={spec.tgt_radius}}}'
    if isinstance(spec, Recenter):
        return (f'recenter{{{format_map(spec.base)},a={_literal(source, spec.a)},'
                f'b={_literal(target, spec.b)}}}')
    if isinstance(spec, Diff):
        return f'diff{{{format_map(spec.base)},g={_literal(source, spec.g)}}}'
    raise TypeError(f'{type(spec).__name__} is not a map family')

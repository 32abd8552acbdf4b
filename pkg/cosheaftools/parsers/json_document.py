import json
import logging
import os
import time

from cosheaftools.algebra.groups import AbGroup
from cosheaftools.algebra.linalg import IntMatrix
from cosheaftools.common import utils
from cosheaftools.common.attributes import (
    DocumentAttributes,
    integer_processor,
    list_processor,
    name_processor,
)
from cosheaftools.common.exceptions import (
    DocumentException,
    InputError,
)
from cosheaftools.core.cosheaf import validate_cosheaf
from cosheaftools.topology.poset import validate_poset
from cosheaftools.topology.simplicial import (
    CHAIN_SEPARATOR,
    SIMPLEX_SEPARATOR,
    SimplicialComplex,
    face_poset,
)

log = logging.getLogger(__name__)


class InputDocument:
    """A parsed and validated input document. *complex* is None for poset
    documents; *poset* is the face poset for complex documents."""

    def __init__(self, kind, poset, complex, groups, maps, path=None):
        self.kind = kind
        self.poset = poset
        self.complex = complex
        self.groups = groups
        self.maps = maps
        self.path = path

    @property
    def is_complex(self):
        return self.kind == DocumentAttributes.KIND_COMPLEX

    def __repr__(self):
        return 'InputDocument({0}, {1} element(s), {2} map(s))'.format(
            self.kind, len(self.poset), len(self.maps)
        )


def _reject_duplicates(pairs):
    result = {}
    for key, value in pairs:
        if key in result:
            raise DocumentException(
                'Duplicate key {0!r}'.format(key), field=key
            )
        result[key] = value
    return result


def _line_of(text, field):
    """Best-effort source line of the last component of a field path."""
    if not field:
        return None
    key = json.dumps(field.split('.')[-1], ensure_ascii=False)
    position = text.find(key)
    if position < 0:
        return None
    return text.count('\n', 0, position) + 1


class JsonDocumentParser:
    """
    The JsonDocumentParser class reads cosheaf input documents. A document is
    a UTF-8 JSON object describing a base space and a cosheaf on it.

    **Base space**

    The *kind* key selects how the base space is given.

    +-----------+-------------------+-----------------------------------------+
    | Key       | Value             | Description                             |
    +===========+===================+=========================================+
    | kind      | simplicial-complex| The base is the face poset of a         |
    |           |                   | simplicial complex.                     |
    |           +-------------------+-----------------------------------------+
    |           | poset             | The base is an explicit finite poset.   |
    +-----------+-------------------+-----------------------------------------+
    | vertices  | *list*            | (simplicial-complex) Vertex names.      |
    +-----------+-------------------+-----------------------------------------+
    | simplices | *list of lists*   | (simplicial-complex) Simplices as vertex|
    |           |                   | lists. The list is closed under faces,  |
    |           |                   | explicit faces are deduplicated.        |
    +-----------+-------------------+-----------------------------------------+
    | elements  | *list*            | (poset) Element names.                  |
    +-----------+-------------------+-----------------------------------------+
    | hasse     | *list of pairs*   | (poset) Covering pairs [upper, lower].  |
    +-----------+-------------------+-----------------------------------------+

    Face poset elements are named by joining vertex names with ",", so the
    triangle on a, b, c contributes the element "a,b,c".

    **Cosheaf**

    +-----------+-------------------+-----------------------------------------+
    | Key       | Value             | Description                             |
    +===========+===================+=========================================+
    | groups    | *object*          | (required) One entry per element:       |
    |           |                   | {"gens": g, "relations": matrix}.       |
    +-----------+-------------------+-----------------------------------------+
    | maps      | *object*          | One entry per covering pair, keyed      |
    |           |                   | "upper>lower".                          |
    +-----------+-------------------+-----------------------------------------+

    Matrices are lists of rows. A relation matrix has *gens* rows and one
    column per relation; an empty list means no relations. A map matrix has
    one row per target generator and one column per source generator.
    Entries are JSON integers or decimal strings.

    .. note:: Element names may not contain ">" since it separates map keys.
    """

    @staticmethod
    def parse(path):
        """
        Parse and validate the document at *path*. The first problem found
        is raised as a DocumentException carrying line and field context.
        """
        start_time = time.time()
        if not os.path.isfile(path):
            raise InputError('No such document: {0}'.format(path))
        try:
            with open(path, 'rb') as f:
                text = f.read().decode('utf-8')
        except UnicodeDecodeError as e:
            raise DocumentException(
                'Document is not valid UTF-8: {0}'.format(e)
            )
        log.debug('Parsing document {0}'.format(path))
        document = JsonDocumentParser.parse_text(text, path)
        log.debug(
            '...parsed {0} in {1}'.format(
                document,
                utils.time_delta_string(start_time, time.time())
            )
        )
        return document

    @staticmethod
    def parse_text(text, path=None):
        if not text.strip():
            raise DocumentException(
                'Syntax error: the document is empty', line=1
            )
        try:
            root = json.loads(text, object_pairs_hook=_reject_duplicates)
        except json.JSONDecodeError as e:
            raise DocumentException(
                'Syntax error: {0}'.format(e.msg), line=e.lineno
            )
        except DocumentException as e:
            raise DocumentException(
                e.detail, e.field, _line_of(text, e.field)
            )
        try:
            return JsonDocumentParser.from_record(root, path)
        except DocumentException as e:
            if e.line is not None:
                raise
            raise DocumentException(
                e.detail, e.field, _line_of(text, e.field)
            )

    @staticmethod
    def from_record(root, path=None):
        root = DocumentAttributes.process_attributes(
            root, defaults=DocumentAttributes.DOCUMENT_DEFAULTS
        )
        kind = root.get(DocumentAttributes.KEY_KIND)
        if kind not in DocumentAttributes.KINDS:
            raise DocumentException(
                'Unknown document kind {0!r}, expected one of {1}'.format(
                    kind, ', '.join(DocumentAttributes.KINDS)
                ),
                field=DocumentAttributes.KEY_KIND
            )
        required = DocumentAttributes.REQUIRED_KEYS[kind] + (
            DocumentAttributes.KEY_GROUPS,
        )
        for key in required:
            if key not in root:
                raise DocumentException(
                    'Missing required key for a {0} document'.format(kind),
                    field=key
                )
        if kind == DocumentAttributes.KIND_COMPLEX:
            K = JsonDocumentParser._parse_complex(root)
            P = face_poset(K)
        else:
            K = None
            P = JsonDocumentParser._parse_poset(root)
        groups = JsonDocumentParser._parse_groups(
            root[DocumentAttributes.KEY_GROUPS], P
        )
        maps = JsonDocumentParser._parse_maps(
            root[DocumentAttributes.KEY_MAPS], P, groups
        )
        return InputDocument(kind, P, K, groups, maps, path)

    @staticmethod
    def _parse_complex(root):
        field = DocumentAttributes.KEY_VERTICES
        vertices = []
        for v in root[field]:
            name = name_processor(v, field)
            for separator in (SIMPLEX_SEPARATOR, CHAIN_SEPARATOR):
                if separator in name:
                    raise DocumentException(
                        'Vertex names may not contain {0!r}'.format(
                            separator
                        ),
                        field
                    )
            vertices.append(name)
        field = DocumentAttributes.KEY_SIMPLICES
        simplices = [
            list_processor(s, field) for s in root[field]
        ]
        try:
            return SimplicialComplex.closure(vertices, simplices)
        except InputError as e:
            raise DocumentException(str(e), field)

    @staticmethod
    def _parse_poset(root):
        field = DocumentAttributes.KEY_ELEMENTS
        elements = [name_processor(x, field) for x in root[field]]
        field = DocumentAttributes.KEY_HASSE
        hasse = []
        for pair in root[field]:
            pair = list_processor(pair, field)
            if len(pair) != 2:
                raise DocumentException(
                    'Covering pairs must read [upper, lower], got '
                    '{0!r}'.format(pair),
                    field
                )
            hasse.append(tuple(name_processor(x, field) for x in pair))
        try:
            return validate_poset(elements, hasse)
        except InputError as e:
            raise DocumentException(str(e), field)

    @staticmethod
    def _parse_matrix(value, rows, cols, field):
        """Rows of integers; *cols* None infers the width from the rows."""
        value = list_processor(value, field)
        if not value and (rows == 0 or cols in (None, 0)):
            return IntMatrix.zeros(rows, cols or 0)
        if len(value) != rows:
            raise DocumentException(
                'Expected {0} row(s), got {1}'.format(rows, len(value)),
                field
            )
        parsed = []
        for i, row in enumerate(value):
            row = list_processor(row, field)
            if cols is None:
                cols = len(row)
            if len(row) != cols:
                raise DocumentException(
                    'Row {0} has {1} entries, expected {2}'.format(
                        i, len(row), cols
                    ),
                    field
                )
            parsed.append([integer_processor(v, field) for v in row])
        return IntMatrix.from_rows(parsed, cols)

    @staticmethod
    def _parse_groups(entries, P):
        groups = {}
        for name in entries:
            if name not in P:
                raise DocumentException(
                    'Group given for unknown element {0!r}'.format(name),
                    field=name
                )
        for x in P.elements:
            if x not in entries:
                raise DocumentException(
                    'No group given for element {0!r}'.format(x),
                    field=DocumentAttributes.KEY_GROUPS
                )
            prefix = '{0}.{1}.'.format(DocumentAttributes.KEY_GROUPS, x)
            entry = DocumentAttributes.process_attributes(
                entries[x], prefix, DocumentAttributes.GROUP_DEFAULTS
            )
            if DocumentAttributes.KEY_GENS not in entry:
                raise DocumentException(
                    'Missing generator count',
                    prefix + DocumentAttributes.KEY_GENS
                )
            gens = entry[DocumentAttributes.KEY_GENS]
            relations = JsonDocumentParser._parse_matrix(
                entry[DocumentAttributes.KEY_RELATIONS], gens, None,
                prefix + DocumentAttributes.KEY_RELATIONS
            )
            groups[x] = AbGroup(gens, relations)
        return groups

    @staticmethod
    def _parse_maps(entries, P, groups):
        maps = {}
        for key, value in entries.items():
            field = '{0}.{1}'.format(DocumentAttributes.KEY_MAPS, key)
            upper, lower = DocumentAttributes.split_map_key(key, field)
            for x in (upper, lower):
                if x not in P:
                    raise DocumentException(
                        'Map references unknown element {0!r}'.format(x),
                        field=key
                    )
            if (upper, lower) not in P.hasse:
                raise DocumentException(
                    '{0} is not a covering pair'.format(key), field=key
                )
            maps[(upper, lower)] = JsonDocumentParser._parse_matrix(
                value, groups[lower].gens, groups[upper].gens, key
            )
        for upper, lower in sorted(P.hasse):
            if (upper, lower) not in maps:
                raise DocumentException(
                    'No map given for covering pair {0}{1}{2}'.format(
                        upper, DocumentAttributes.MAP_SEPARATOR, lower
                    ),
                    field=DocumentAttributes.KEY_MAPS
                )
        return maps


def parse(path):
    return JsonDocumentParser.parse(path)


def build_cosheaf(document):
    """Validate the document's cosheaf data (well-definedness and
    functoriality) and return the CellularCosheaf."""
    return validate_cosheaf(document.poset, document.groups, document.maps)

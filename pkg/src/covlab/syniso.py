"""Isothetic faces, synisothetic pairs of polytopes and face signs.

Two faces are isothetic when one is a translate of the other and their
support cones coincide.  Both conditions are captured by a hashable key: the
support-cone normals (primitive, sorted) together with the face's vertex set
moved so that its lexicographically smallest vertex sits at the origin.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .exactgeom import Polytope, Vec, reflect, vec, vneg, vsub
from .faces import Face, difference_body, exposed_face, face_lattice, support_cone

__all__ = [
    "IsothesisCertificate", "FaceSign", "NotSynisothetic", "isothetic", "face_key",
    "synisothetic", "synisothetic_with_witness", "face_sign", "corpodiff_check",
    "antipodal_translation_check",
]


class NotSynisothetic(ValueError):
    pass


@dataclass(frozen=True)
class IsothesisCertificate:
    F: Face
    G: Face
    x: Vec
    cone_match: bool


@dataclass(frozen=True)
class FaceSign:
    face: Face
    sign: str          # "positive", "negative" or "neutral"
    x_plus: Vec | None
    x_minus: Vec | None


def _shape(F: Face) -> tuple[Vec, tuple]:
    verts = sorted(F.vertices)
    base = verts[0]
    return base, tuple(vsub(v, base) for v in verts)


def face_key(P: Polytope, F: Face) -> tuple:
    """Isothesis class of ``F`` as a face of ``P``."""
    return support_cone(P, F).canonical(), _shape(F)[1]


def translation_between(F: Face, G: Face) -> Vec | None:
    """``x`` with ``G = F + x`` as vertex sets, or ``None``."""
    bf, sf = _shape(F)
    bg, sg = _shape(G)
    return vsub(bg, bf) if sf == sg else None


def isothetic(P: Polytope, F: Face, Q: Polytope, G: Face) -> IsothesisCertificate | None:
    x = translation_between(F, G)
    if x is None:
        return None
    if support_cone(P, F).canonical() != support_cone(Q, G).canonical():
        return None
    return IsothesisCertificate(F, G, x, True)


@lru_cache(maxsize=256)
def _keyed_faces(P: Polytope) -> tuple:
    return tuple((face_key(P, F), F) for F in face_lattice(P))


def synisothetic_with_witness(P1: Polytope, P2: Polytope, Q1: Polytope, Q2: Polytope):
    """Decide synisothesis of ``(P1, P2)`` and ``(Q1, Q2)``.

    Returns ``(verdict, witness)``.  The witness maps
    ``(side, index, vertex_ids)`` of every proper face on either side to the
    list of isothetic faces on the other side (all of them, since matches
    need not be unique).  ``side`` is 0 for the P pair and 1 for the Q pair.
    """
    left = [(0, j, key, F) for j, P in enumerate((P1, P2)) for key, F in _keyed_faces(P)]
    right = [(1, k, key, G) for k, Q in enumerate((Q1, Q2)) for key, G in _keyed_faces(Q)]
    by_key: dict = {}
    for side, idx, key, F in left + right:
        by_key.setdefault(key, []).append((side, idx, F.vertex_ids))
    witness = {}
    ok = True
    for side, idx, key, F in left + right:
        matches = [m for m in by_key[key] if m[0] != side]
        witness[(side, idx, F.vertex_ids)] = matches
        if not matches:
            ok = False
    return ok, witness


def synisothetic(P1: Polytope, P2: Polytope, Q1: Polytope, Q2: Polytope) -> bool:
    return synisothetic_with_witness(P1, P2, Q1, Q2)[0]


@lru_cache(maxsize=256)
def _self_pair_synisothetic(P: Polytope, Pp: Polytope) -> bool:
    return synisothetic(P, reflect(P), Pp, reflect(Pp))


def _match(P: Polytope, F: Face, Q: Polytope, w: Vec) -> Vec | None:
    """Translation ``x`` with ``P_w = Q_w + x`` and equal support cones, if any."""
    G = exposed_face(Q, w)
    cert = isothetic(Q, G, P, F)
    return cert.x if cert is not None else None


def face_sign(P: Polytope, Pp: Polytope, w: Sequence | Face) -> FaceSign:
    """Sign of the face ``F = P_w`` relative to ``P'``.

    Tests ``P_w = (s P')_w + x`` with equal support cones for ``s = +1`` and
    ``s = -1``; the successful translations are ``x_plus`` and ``x_minus``.
    Requires ``(P, -P)`` and ``(P', -P')`` to be synisothetic.
    """
    if isinstance(w, Face):
        from .faces import normal_cone_interior
        w = normal_cone_interior(P, w)
    w = vec(w)
    if not _self_pair_synisothetic(P, Pp):
        raise NotSynisothetic("(P, -P) and (P', -P') are not synisothetic")
    F = exposed_face(P, w)
    xp = _match(P, F, Pp, w)
    xm = _match(P, F, reflect(Pp), w)
    if xp is not None and xm is not None:
        sign = "neutral"
    elif xp is not None:
        sign = "positive"
    elif xm is not None:
        sign = "negative"
    else:  # cannot happen under synisothesis
        raise NotSynisothetic(f"no isothetic partner for the face exposed by {w}")
    return FaceSign(F, sign, xp, xm)


def antipodal_translation_check(P: Polytope, Pp: Polytope, w: Sequence) -> bool:
    """If ``P_w = (s P')_w + x`` then also ``P_{-w} = (s P')_{-w} + x`` with the same ``x``."""
    w = vec(w)
    fs = face_sign(P, Pp, w)
    G = exposed_face(P, vneg(w))
    for sigma_body, x in ((Pp, fs.x_plus), (reflect(Pp), fs.x_minus)):
        if x is None:
            continue
        y = _match(P, G, sigma_body, vneg(w))
        if y != x:
            return False
    return True


def corpodiff_check(P: Polytope, Pp: Polytope) -> bool:
    """Synisothesis of ``(P, -P)`` and ``(P', -P')`` implies equal difference bodies."""
    if not _self_pair_synisothetic(P, Pp):
        return True
    return difference_body(P) == difference_body(Pp)

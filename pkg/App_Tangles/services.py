"""
Shared plumbing for the management commands and the API: loading an
instance, reusing stored tangle data structures, and the documents each
computation hands back.
"""

import logging
from dataclasses import dataclass
from typing import Optional

from . conf import setting
from . connectivity import ConnectivityOracle, verify_axioms
from . decomposition import (
    DirectedTreeDecomposition, TreeDecomposition, attach_tangles, canonical_decomposition,
    directed_decomposition, refine_single_tangle,
)
from . exceptions import DomainError, TanglesError
from . export import prune_empty_bags, verify_document
from . instances import build_oracle, instance_digest, parse_text
from . models import DecompositionRecord, StructureCache
from . oracles import brute_force_branch_width, brute_force_tangles, canonicity_harness
from . subsets import members
from . tangle_ds import TangleDataStructure
from . tangles import max_tangle_order

logger = logging.getLogger(__name__)


@dataclass
class LoadedInstance:
    text: str
    digest: str
    oracle: ConnectivityOracle

    @property
    def function(self) -> str:
        return self.oracle.name


def load_instance(text: str, fn: Optional[str] = None) -> LoadedInstance:
    return LoadedInstance(text, instance_digest(text), build_oracle(parse_text(text), fn))


def structure(loaded: LoadedInstance, order: int, engine: Optional[str] = None, cache: bool = True) -> TangleDataStructure:
    """The tangle data structure of `order`, read from the cache when one is stored."""
    if cache:
        entry = StructureCache.objects.filter(digest=loaded.digest, function=loaded.function, order=order).first()
        if entry:
            try:
                return TangleDataStructure.from_json(loaded.oracle, entry.document)
            except TanglesError as e:
                logger.warning(f"stored structure {entry} is unusable, rebuilding: {e}")
    ds = TangleDataStructure.build(loaded.oracle, order, engine)
    if cache:
        StructureCache.objects.update_or_create(
            digest=loaded.digest,
            function=loaded.function,
            order=order,
            defaults={'document': ds.to_json()},
        )
    return ds


def census(ds: TangleDataStructure) -> dict:
    orders = []
    for k in range(ds.k + 1):
        indices = list(ds.indices(k))
        orders.append({
            "order": k,
            "count": len(indices),
            "tangles": [{"index": i, "signature": [members(x) for x in ds.tangle(i).signature]} for i in indices],
        })
    return {
        "function": ds.oracle.name,
        "n": ds.oracle.n,
        "k": ds.k,
        "size": ds.size(),
        "maximal": ds.maximal_indices(),
        "orders": orders,
    }


def branch_width(loaded: LoadedInstance, brute: bool = False, engine: Optional[str] = None) -> dict:
    width = max_tangle_order(loaded.oracle, engine)
    return {"width": width, "brute": brute_force_branch_width(loaded.oracle) if brute else None}


def decompose(loaded: LoadedInstance, order: int, refined: bool = False, prune: bool = False,
              engine: Optional[str] = None, cache: bool = True) -> TreeDecomposition:
    ds = structure(loaded, order, engine, cache)
    if refined:
        td = refine_single_tangle(loaded.oracle, order, engine)
    else:
        td = canonical_decomposition(loaded.oracle, order, ds=ds, engine=engine)
    if prune:
        td = prune_empty_bags(td)
    if refined or prune:
        try:
            td = attach_tangles(td, ds, order)
        except DomainError as e:
            logger.warning(f"tangles of {loaded.function} do not sit on single nodes of the post-processed tree: {e}")
    return td


def directed(loaded: LoadedInstance, order: int, root_index: int, engine: Optional[str] = None,
             cache: bool = True) -> DirectedTreeDecomposition:
    ds = structure(loaded, order, engine, cache)
    return directed_decomposition(loaded.oracle, order, root_index, ds=ds)


def verify(loaded: LoadedInstance, doc: dict, engine: Optional[str] = None, cache: bool = True) -> dict:
    order = doc.get("order")
    if not isinstance(order, int):
        raise DomainError("decomposition document has no order")
    return verify_document(loaded.oracle, doc, structure(loaded, order, engine, cache)).as_dict()


def record(loaded: LoadedInstance, variant: str, order: int, doc: dict,
           root_index: Optional[int] = None) -> DecompositionRecord:
    obj, created = DecompositionRecord.objects.update_or_create(
        digest=loaded.digest,
        function=loaded.function,
        order=order,
        variant=variant,
        root_index=root_index,
        defaults={'document': doc},
    )
    return obj


def selfcheck(loaded: LoadedInstance, order: int, trials: int, seed: Optional[int],
              max_exhaustive: Optional[int] = None, engine: Optional[str] = None) -> dict:
    """Axioms, agreement with the brute-force oracles, and canonicity trials."""
    oracle = loaded.oracle
    axioms = verify_axioms(oracle, max_exhaustive=max_exhaustive, seed=seed)
    ds = TangleDataStructure.build(oracle, order, engine)
    disagreements = []
    skipped = []
    if oracle.n <= setting('TANGLES_BRUTE_FORCE_LIMIT'):
        for k in range(order + 1):
            fast = sorted(sorted(ds.tangle(i).key()[1]) for i in ds.indices(k))
            slow = sorted(sorted(t.key()[1]) for t in brute_force_tangles(oracle, k))
            if fast != slow:
                disagreements.append(f"order {k}: {len(fast)} tangles in the data structure, {len(slow)} by brute force")
    else:
        skipped.append("brute-force tangles")
    if oracle.n <= setting('TANGLES_BRANCH_WIDTH_LIMIT'):
        width, brute = max_tangle_order(oracle, engine), brute_force_branch_width(oracle)
        if width != brute:
            disagreements.append(f"largest tangle order {width} differs from branch width {brute}")
    else:
        skipped.append("brute-force branch width")
    canonicity = canonicity_harness(oracle, order, trials=trials, seed=0 if seed is None else seed,
                                     engine=engine)
    findings = ds.integrity_report()
    return {
        "ok": axioms.ok and not disagreements and not findings and canonicity.ok,
        "axioms": axioms.as_dict(),
        "disagreements": disagreements,
        "integrity": findings,
        "canonicity": canonicity.as_dict(),
        "skipped": skipped,
    }


__all__ = [
    "LoadedInstance", "load_instance", "structure", "census", "branch_width", "decompose", "directed",
    "verify", "record", "selfcheck",
]

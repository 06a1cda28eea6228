from argparse import Namespace
from typing import Optional

from ninfty.engine.graph_subgroups import check_arity
from ninfty.engine.norms import NormSpec, admissible_sets, audit_closure_properties, norms_to_sequence
from ninfty.engine.realizability import (
    enumerate_realizable,
    is_realizable,
    realizable_closure,
    sequence_poset,
)
from ninfty.utils.errors import DescriptorError, NinftyError
from ninfty.utils.logger import logger
from ninfty.utils.serialization import (
    audit_json,
    canonical_json,
    family_json,
    load_group,
    load_h_family,
    load_sequence,
    mode_json,
    parse_generators,
    parse_norm,
    poset_dot,
    rho_json,
    sequence_from_indices,
    sequence_id,
    sequence_json,
    sequence_to_indices,
    witness_json,
    write_text,
)
from ninfty.utils.storage import CacheHandler, cache_key


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        write_text(output, text)
        logger.info(f"wrote {output}")
    else:
        print(text, end="")


def cmd_check(args: Namespace) -> int:
    """Exit 0 when the sequence is realizable, 1 with a witness when it is not."""
    try:
        loaded = load_sequence(args.file, strict=args.strict)
        result = is_realizable(loaded.seq, over=loaded.h_family)
        if result:
            print(canonical_json({"realizable": True}), end="")
            return 0
        print(canonical_json({"realizable": False, "witness": witness_json(loaded.group, result.witness)}), end="")
        return 1

    except NinftyError:
        raise

    except Exception as e:
        logger.error(f"check failed for {args.file}: {str(e)}")
        raise


def cmd_close(args: Namespace) -> int:
    try:
        loaded = load_sequence(args.file)
        closed = realizable_closure(loaded.seq, over=loaded.h_family)
        _emit(canonical_json(sequence_json(loaded.spec, closed, loaded.mode, loaded.h_family)), args.output)
        return 0

    except NinftyError:
        raise

    except Exception as e:
        logger.error(f"close failed for {args.file}: {str(e)}")
        raise


def cmd_from_norms(args: Namespace) -> int:
    """Minimal realizable N-infinity sequence admitting the requested norms."""
    try:
        check_arity(args.max_arity)
        group = load_group(args.group)
        spec = NormSpec(tuple(parse_norm(group, text) for text in args.norm or []))
        seq = norms_to_sequence(group, spec, args.max_arity)
        _emit(canonical_json(sequence_json(args.group, seq)), args.output)
        return 0

    except NinftyError:
        raise

    except Exception as e:
        logger.error(f"from-norms failed for {args.group}: {str(e)}")
        raise


def cmd_enumerate(args: Namespace) -> int:
    """All realizable sequences with their Hasse diagram, optionally as DOT."""
    try:
        check_arity(args.max_arity)
        group = load_group(args.group)
        if args.mode == "full":
            mode, h_family = "n_infinity", None
        elif args.mode.startswith("h:") and len(args.mode) > 2:
            mode, h_family = "h_family", load_h_family(group, args.mode[2:])
        else:
            raise DescriptorError(f"unknown mode {args.mode!r}; use full or h:<file>")

        params = {
            "max_arity": args.max_arity,
            "h_family": None if h_family is None else sorted(list(H.elements) for H in h_family),
        }
        payload = CacheHandler().get_or_compute(
            cache_key(group.fingerprint, "enumerate", params),
            lambda: [sequence_to_indices(s) for s in enumerate_realizable(group, args.max_arity, h_family)],
        )
        sequences = [sequence_from_indices(group, levels) for levels in payload]
        edges = sequence_poset(sequences)
        ids = [sequence_id(s) for s in sequences]

        out = {
            "group": args.group,
            "max_arity": args.max_arity,
            "mode": mode_json(mode, h_family),
            "count": len(sequences),
            "sequences": [
                {"id": i, "families": [family_json(group, n, f) for n, f in enumerate(s.families)]}
                for i, s in zip(ids, sequences)
            ],
            "hasse_edges": [[ids[i], ids[j]] for i, j in edges],
        }
        if args.poset:
            write_text(args.poset, poset_dot(sequences, edges))
            logger.info(f"wrote poset with {len(edges)} edges to {args.poset}")
        print(canonical_json(out), end="")
        return 0

    except NinftyError:
        raise

    except Exception as e:
        logger.error(f"enumerate failed for {args.group}: {str(e)}")
        raise


def cmd_audit(args: Namespace) -> int:
    """Coproduct, product and self-induction closure of the admissible sets."""
    try:
        loaded = load_sequence(args.file)
        report = audit_closure_properties(loaded.seq, representatives=args.representatives)
        print(canonical_json(audit_json(loaded.group, report)), end="")
        return 0 if report.passed else 1

    except NinftyError:
        raise

    except Exception as e:
        logger.error(f"audit failed for {args.file}: {str(e)}")
        raise


def cmd_admissible(args: Namespace) -> int:
    try:
        loaded = load_sequence(args.file)
        H = parse_generators(loaded.group, args.subgroup)
        sets = admissible_sets(loaded.seq, H)
        out = {
            "H": list(H.elements),
            "admissible": [{"arity": a.arity, "rho": rho_json(H, a.arity, a.rho.images)} for a in sets],
        }
        print(canonical_json(out), end="")
        return 0

    except NinftyError:
        raise

    except Exception as e:
        logger.error(f"admissible failed for {args.file}: {str(e)}")
        raise

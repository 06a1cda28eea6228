from argparse import Namespace

from ninfty.engine.graph_subgroups import all_graph_subgroups, check_arity
from ninfty.engine.group_core import all_subgroups, subgroup_classes
from ninfty.utils.errors import NinftyError
from ninfty.utils.logger import logger
from ninfty.utils.serialization import canonical_json, load_group, rho_json, subgroup_json
from ninfty.utils.storage import CacheHandler, cache_key


def cmd_group(args: Namespace) -> int:
    """Order of a group, optionally its subgroups and their conjugacy classes."""
    try:
        group = load_group(args.group)
        cache = CacheHandler()
        out = {"group": args.group, "label": group.label, "order": group.order}

        if args.subgroups:
            out["subgroups"] = cache.get_or_compute(
                cache_key(group.fingerprint, "subgroups", {}),
                lambda: [list(s.elements) for s in all_subgroups(group)],
            )
        if args.conjugacy:
            out["conjugacy_classes"] = cache.get_or_compute(
                cache_key(group.fingerprint, "conjugacy", {}),
                lambda: subgroup_classes(group),
            )

        print(canonical_json(out), end="")
        return 0

    except NinftyError:
        raise

    except Exception as e:
        logger.error(f"group command failed for {args.group}: {str(e)}")
        raise


def cmd_graphs(args: Namespace) -> int:
    """Every graph subgroup of G x Sigma_n with its (H, rho) decomposition."""
    try:
        check_arity(args.arity)
        group = load_group(args.group)
        n = args.arity

        def compute():
            return [
                {
                    "H": list(datum.H.elements),
                    "rho": rho_json(datum.H, n, datum.rho.images),
                    "elements": subgroup_json(group, n, gamma),
                }
                for datum, gamma in all_graph_subgroups(group, n)
            ]

        graphs = CacheHandler().get_or_compute(cache_key(group.fingerprint, "graphs", {"arity": n}), compute)
        print(canonical_json({"group": args.group, "arity": n, "count": len(graphs), "graphs": graphs}), end="")
        return 0

    except NinftyError:
        raise

    except Exception as e:
        logger.error(f"graphs command failed for {args.group}: {str(e)}")
        raise

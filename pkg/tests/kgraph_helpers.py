"""Extra k-graph fixtures for the tests."""

from fellkms.kgraph import FiniteKGraph


def product_2graph(g1, g2):
    """Cartesian product of two 1-graphs; ``(e, v) (w, f) = (v', f) (e, w')``."""
    n2 = g2.n_vertices
    vid = lambda a, b: a * n2 + b  # noqa: E731
    colors, src, dst, labels, index = [], [], [], [], {}
    for e in range(g1.n_edges):
        for b in range(n2):
            index[("h", e, b)] = len(colors)
            colors.append(0)
            src.append(vid(g1.edge_src[e], b))
            dst.append(vid(g1.edge_dst[e], b))
            labels.append(f"h{e}.{b}")
    for a in range(g1.n_vertices):
        for f in range(g2.n_edges):
            index[("v", a, f)] = len(colors)
            colors.append(1)
            src.append(vid(a, g2.edge_src[f]))
            dst.append(vid(a, g2.edge_dst[f]))
            labels.append(f"v{a}.{f}")
    table = {}
    for e in range(g1.n_edges):
        for f in range(g2.n_edges):
            a = index[("h", e, g2.edge_dst[f])]
            b = index[("v", g1.edge_src[e], f)]
            b2 = index[("v", g1.edge_dst[e], f)]
            a2 = index[("h", e, g2.edge_src[f])]
            table[(a, b)] = (b2, a2)
    return FiniteKGraph(2, g1.n_vertices * n2, tuple(colors), tuple(src), tuple(dst), {(0, 1): table},
                        edge_labels=tuple(labels), name="product")


def flip_3graph():
    """One vertex, one loop of each of three colours."""
    fac = {(0, 1): {(0, 1): (1, 0)}, (0, 2): {(0, 2): (2, 0)}, (1, 2): {(1, 2): (2, 1)}}
    return FiniteKGraph(3, 1, (0, 1, 2), (0, 0, 0), (0, 0, 0), fac)

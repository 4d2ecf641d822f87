from bmctree import RootedTree


def ids(t: RootedTree, *labels):
    """Vertex ids of ``labels`` as an ascending tuple."""
    return tuple(sorted(t.id(s) for s in labels))


def zeros(t: RootedTree, *labels):
    """Configuration putting symbol 0 on each labelled vertex."""
    return {t.id(s): 0 for s in labels}


def spec_example_tree(root="(0,-1)"):
    """The counter-example tree with vertices listed in time order."""
    labels = ["(0,-1)", "(0,0)", "(0,1)", "(1,0)", "(2,0)"]
    edges = [("(0,-1)", "(0,0)"), ("(0,0)", "(0,1)"), ("(0,0)", "(1,0)"), ("(1,0)", "(2,0)")]
    return RootedTree.from_labels(labels, edges, root)

from rs_list_decoding.flow import FlowNetwork


def diamond():
    network = FlowNetwork(4)
    for src, dst in ((0, 1), (0, 2), (1, 3), (2, 3), (1, 2)):
        network.add_edge(src, dst)
    return network


def test_max_flow():
    network = diamond()
    assert network.max_flow(0, 3) == 2
    assert network.max_flow(0, 3) == 2
    assert network.max_flow(0, 3, limit=1) == 1
    assert network.max_flow(2, 2) == 0
    assert network.max_flow(3, 0) == 0


def test_add_vertex():
    network = diamond()
    sink = network.add_vertex()
    assert len(network) == 5
    assert network.max_flow(0, sink) == 0
    network.add_edge(3, sink, cap=5)
    assert network.max_flow(0, sink) == 2

"""Shape-based manifold learning.

Embeds a point cloud by accumulating, along neighbourhood-graph geodesics, the
angle each step subtends at a reference point, then eigendecomposing the
cosine matrix of those accumulated angles. Isomap and Sammon mapping are
included as baselines.
"""
from .angles import accumulated_angles, cosine_matrix, edge_angle, edge_angles
from .dataset import LabelSet, PointCloud, Reference, centroid, resolve_reference
from .graph import (GeodesicResult, NeighborGraph, WeightMode, all_pairs_shortest,
                    connected_components, eps_graph, floyd_warshall_oracle, knn_graph,
                    shortest_path)
from .kernels import BACKEND
from .metrics import (nn_label_accuracy, procrustes, sammon_stress, set_separation,
                      spectral_ratio, winding_count)
from .spectral import (EigenPairs, Embedding, Method, isomap_embed, jacobi_eigen,
                       sammon_embed, shamap_embed)
from .synth import (HelixSpec, gen_double_helix, gen_embedded_plane, gen_helix,
                    gen_toy_protein)

__version__ = "0.1.0"

# Copyright 2026 The treematch Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# Import the graph model for easier usage.
from .graph import Dataset  # noqa
from .graph import Graph  # noqa
from .graph import Split  # noqa
from .tudataset import load_split  # noqa
from .tudataset import load_tudataset  # noqa
from .tudataset import save_tudataset  # noqa
from .sampling import random_gnp  # noqa
from .sampling import sample_pairs  # noqa
from .sampling import stratified_split  # noqa

# Import cost trees and tree assignments for easier usage.
from .tree import CostTree  # noqa
from .tree import Hierarchy  # noqa
from .tree import LeafMap  # noqa
from .tree import attach_epsilon_node  # noqa
from .tree import dumps_tree  # noqa
from .tree import loads_tree  # noqa
from .tree import lowest_common_ancestor  # noqa
from .tree import minimal_subtree  # noqa
from .tree import path_distance  # noqa
from .tree import path_distance_matrix  # noqa
from .tree import validate_ultrametric  # noqa
from .assignment import Assignment  # noqa
from .assignment import AssignmentInstance  # noqa
from .assignment import SparseEmbedding  # noqa
from .assignment import assignment_cost  # noqa
from .assignment import construct_assignment  # noqa
from .assignment import construct_assignment_pruned  # noqa
from .assignment import dumps_embedding  # noqa
from .assignment import embed  # noqa
from .assignment import embed_dataset  # noqa
from .assignment import l1_distance  # noqa
from .assignment import side_counts  # noqa

# Import the matrix baselines for easier usage.
from .baseline import CostMatrix  # noqa
from .baseline import bp_cost_matrix  # noqa
from .baseline import greedy_rowwise  # noqa
from .baseline import hungarian  # noqa
from .baseline import strong_triangle_violations  # noqa
from .baseline import ultra_cost_matrix  # noqa

# Import the hierarchies for easier usage.
from .wl import WlConfig  # noqa
from .wl import build_wl_tree  # noqa
from .wl import refine  # noqa
from .wl import refine_step  # noqa
from .clustering import ClusterConfig  # noqa
from .clustering import build_cluster_hierarchy  # noqa
from .clustering import build_cluster_tree  # noqa
from .clustering import lloyd2  # noqa

# Import graph edit distance and its methods for easier usage.
from .costs import EditCosts  # noqa
from .ged import GedResult  # noqa
from .ged import VertexMapping  # noqa
from .ged import approx_ged_linear  # noqa
from .ged import approx_ged_matrix  # noqa
from .ged import exact_ged_bruteforce  # noqa
from .ged import induced_edit_cost  # noqa
from .methods import METHODS  # noqa
from .methods import ged_bp  # noqa
from .methods import ged_exact  # noqa
from .methods import ged_greedy  # noqa
from .methods import ged_linear  # noqa
from .methods import make_method  # noqa
from .methods import method_base  # noqa

# Import all built-in stop strategies for easier usage.
from .stop import stop_after_delay  # noqa
from .stop import stop_after_size  # noqa
from .stop import stop_all  # noqa
from .stop import stop_any  # noqa
from .stop import stop_never  # noqa

# Import all built-in after strategies for easier usage.
from .after import after_log  # noqa
from .after import after_nothing  # noqa

# Import the experiment drivers for easier usage.
from .evaluation import DistanceCache  # noqa
from .evaluation import EvalReport  # noqa
from .evaluation import GridSpec  # noqa
from .evaluation import bench_dataset_scaling  # noqa
from .evaluation import bench_scaling  # noqa
from .evaluation import compare_methods  # noqa
from .evaluation import grid_search  # noqa
from .evaluation import knn_predict  # noqa
from .evaluation import loglog_slope  # noqa
from .evaluation import pairwise_distances  # noqa

# Import the error hierarchy for easier usage.
from .errors import TreeMatchError  # noqa
from .errors import ArgumentError  # noqa
from .errors import CapacityError  # noqa
from .errors import ConfigurationError  # noqa
from .errors import CostModelError  # noqa
from .errors import DegenerateClusterError  # noqa
from .errors import FormatError  # noqa
from .errors import IngestionError  # noqa
from .errors import SolverError  # noqa
from .errors import SplitError  # noqa
from .errors import UsageError  # noqa

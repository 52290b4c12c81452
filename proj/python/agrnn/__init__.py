# Copyright 2026 The agrnn Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Feature selection with an anisotropic GRNN."""

from ._core import (
    BenchmarkConfig,
    ContractError,
    Dataset,
    InputError,
    IoError,
    NumericalError,
    OptimizerConfig,
    cfs_select,
    ftest_scores,
    gen_butterfly,
    gen_friedman,
    load_csv,
    loo_loss,
    loo_loss_grad,
    mi_scores,
    min_max_scale,
    minimize,
    parse_report_json,
    predict,
    relevant_subset,
    rrelieff_scores,
    run_benchmark,
    save_csv,
    select,
    shuffle_column,
    shuffle_importance,
    shuffle_importance_generated,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

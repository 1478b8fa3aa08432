#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ttrnn/tensor.hpp"

namespace ttrnn {

/// Values of every TT core at one epoch boundary.
using CoreSnapshot = std::vector<DenseTensor>;

/// Per-core, per-epoch normalized change ||G^e_n - G^{e-1}_n||_F^2 / numel(G_n).
struct CoreChangeLog {
    /// Shape of each core as recorded from the snapshots (may be empty when read from CSV).
    std::vector<Shape> core_shapes;
    /// Epoch label of the first column of `values` (snapshot index 1 -> epoch 2).
    std::size_t first_epoch = 2;
    /// values[n][k]: change of core n+1 between epochs first_epoch+k-1 and first_epoch+k.
    std::vector<std::vector<double>> values;

    std::size_t num_cores() const noexcept { return values.size(); }
    std::size_t num_epochs() const noexcept { return values.empty() ? 0 : values.front().size(); }
    std::size_t num_entries() const noexcept { return num_cores() * num_epochs(); }
};

/// ||after - before||_F^2 / numel. Throws ShapeDrift when the shapes differ.
double normalized_core_change(const DenseTensor& before, const DenseTensor& after);

/// Requires at least two snapshots with identical per-core shapes (ShapeDrift otherwise).
CoreChangeLog core_change(std::span<const CoreSnapshot> snapshots);

struct ModalImportance {
    std::size_t core = 0;  // 1-based
    double aggregate = 0.0;
    std::string mode;
};

/// Cores ordered by summed normalized change, descending; ties go to the lower index.
std::vector<ModalImportance> modal_ranking(const CoreChangeLog& log);

/// Semantic name of the data mode a core is wired to. For the 5-core financial layout
/// cores 1-3 carry the feature sub-modes, core 4 the components within a class and
/// core 5 the asset classes.
std::string mode_label(std::size_t core, std::size_t num_cores);

/// CSV with header `core,epoch,normalized_change`.
void write_core_change_csv(std::ostream& os, const CoreChangeLog& log);
CoreChangeLog read_core_change_csv(std::istream& is);

/// JSON summary with the ranking and per-core mode labels.
std::string ranking_json(const CoreChangeLog& log);

}  // namespace ttrnn

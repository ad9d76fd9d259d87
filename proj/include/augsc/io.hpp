#pragma once

#include "augsc/types.hpp"

#include <string>
#include <vector>

namespace augsc {

// CSV sample files store one sample per row; loading transposes into the
// d x n column convention. Lines starting with '#' are skipped.
DataMatrix load_matrix_csv(const std::string& path);
void save_matrix_csv(const std::string& path, const DataMatrix& x);

// Binary matrix format: magic "ASCM", u32 version (1), u64 rows, u64 cols,
// then rows*cols little-endian doubles in column-major order.
DataMatrix load_matrix_bin(const std::string& path);
void save_matrix_bin(const std::string& path, const DataMatrix& x);

// Dispatches on extension: .csv or .bin.
DataMatrix load_matrix_auto(const std::string& path);
void save_matrix_auto(const std::string& path, const DataMatrix& x);

// One integer per line; -1 marks an unlabeled sample. When p >= 0, labels
// must lie in [-1, p).
std::vector<int> load_labels(const std::string& path, int p = -1);
void save_labels(const std::string& path, const std::vector<int>& labels);

// IDX image file (magic 0x00000803, unsigned bytes): each image becomes one
// column, pixels row-major scaled into [0, 1].
DataMatrix load_idx_images(const std::string& path, int* height = nullptr, int* width = nullptr);

// Directory of binary PGM (P5) files, visited in lexicographic filename
// order. Every image is bilinearly resized to target_h x target_w and scaled
// into [0, 1].
DataMatrix load_pgm_dir(const std::string& dir, int target_h, int target_w,
                        std::vector<std::string>* names = nullptr);

}  // namespace augsc

#pragma once

// Shared test helpers: bundled-data paths and self-cleaning scratch files.

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

inline std::filesystem::path data_dir() { return RADRISK_DATA_DIR; }

inline std::filesystem::path scratch_path(const std::string& name) {
    return std::filesystem::temp_directory_path() /
           ("radrisk_" + std::to_string(::getpid()) + "_" + name);
}

struct TempFile {
    std::filesystem::path path;

    TempFile(const std::string& name, const std::string& contents) : path(scratch_path(name)) {
        std::ofstream f(path);
        f << contents;
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
};

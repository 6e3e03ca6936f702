#pragma once

// Shared test fixtures: the five-vertex example graph, temp-dir plumbing,
// and a harness for driving the CLI binary.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "infoflow/graph.hpp"

namespace helpers {

using namespace infoflow;

// The worked five-vertex example: seven directed weighted edges. Listing
// vertex 1's out-edges as 2,4,5,3 makes the stored first-occurrence order
// match the reference adjacency table.
inline std::vector<EdgeTriple> fig1_triples() {
    return {{1, 2, 2.0}, {1, 4, 4.0}, {1, 5, 5.0}, {1, 3, 4.0},
            {3, 5, 3.0}, {4, 2, 2.0}, {4, 5, 1.0}};
}

inline Graph fig1_graph() { return Graph::from_triples(fig1_triples(), LoadOptions{}); }

inline std::string fig1_file_text() {
    std::string s;
    for (const EdgeTriple& t : fig1_triples()) {
        s += std::to_string(t.src) + " " + std::to_string(t.dst) + " " +
             std::to_string(t.weight) + "\n";
    }
    return s;
}

class TempDir {
public:
    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        for (int attempt = 0; attempt < 10000; ++attempt) {
            auto p = base / ("infoflow_test_" + std::to_string(::getpid()) + "_" +
                             std::to_string(counter()++));
            std::error_code ec;
            if (std::filesystem::create_directory(p, ec)) {
                path_ = p;
                return;
            }
        }
        throw std::runtime_error("cannot create temp directory");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::filesystem::path path_;
};

inline std::filesystem::path write_file(const TempDir& dir, const std::string& name,
                                        const std::string& content) {
    const auto p = dir.file(name);
    std::ofstream out(p);
    out << content;
    return p;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

// Run the CLI with the given argument string; stdout/stderr are captured.
inline CliResult run_cli(const std::string& args, const TempDir& dir,
                         const std::string& tag = "cli") {
    const std::string out_f = dir.file(tag + "_stdout.txt").string();
    const std::string err_f = dir.file(tag + "_stderr.txt").string();
    const std::string cmd =
        std::string(INFOFLOW_CLI_PATH) + " " + args + " >" + out_f + " 2>" + err_f;
    const int rc = std::system(cmd.c_str());
    const int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return {code, read_file(out_f), read_file(err_f)};
}

inline std::filesystem::path data_file(const std::string& name) {
    return std::filesystem::path(INFOFLOW_DATA_DIR) / name;
}

} // namespace helpers

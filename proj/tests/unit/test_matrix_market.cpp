#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "trochoid/ensemble.hpp"
#include "trochoid/errors.hpp"
#include "trochoid/matrix_market.hpp"

using namespace trochoid;

TEST(MatrixMarket, DenseRoundTripIsBitExact) {
    const DenseMatrix m = ensemble::generate_base_iid(7, 3);
    std::stringstream buf;
    io::write_matrix_market(buf, m);
    EXPECT_EQ(buf.str().rfind("%%MatrixMarket matrix array real general", 0), 0u);
    EXPECT_EQ(io::read_matrix_market(buf), m);
}

TEST(MatrixMarket, DigraphUsesOneBasedCoordinates) {
    const SparseDigraph g = ensemble::digraph_from_cycles(3, {{0, 1, 2}}, {1.5});
    std::stringstream buf;
    io::write_matrix_market(buf, g);
    const std::string text = buf.str();
    EXPECT_NE(text.find("coordinate real general"), std::string::npos);
    EXPECT_NE(text.find("\n3 3 3\n"), std::string::npos);
    EXPECT_NE(text.find("\n1 2 1.5\n"), std::string::npos);
    EXPECT_EQ(io::read_matrix_market(buf), ensemble::adjacency_matrix(g));
}

TEST(MatrixMarket, RepeatedCoordinatesAccumulate) {
    std::stringstream buf("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 1\n1 2 2.5\n");
    const DenseMatrix m = io::read_matrix_market(buf);
    EXPECT_EQ(m(0, 1), 3.5);
}

TEST(MatrixMarket, ParseErrorsCarryLineNumbers) {
    auto line_of = [](const std::string& text) {
        std::stringstream buf(text);
        try {
            io::read_matrix_market(buf);
        } catch (const ParseError& e) {
            return static_cast<long>(e.line());
        }
        return -1L;
    };
    EXPECT_EQ(line_of(""), 1);
    EXPECT_EQ(line_of("not a banner\n"), 1);
    EXPECT_EQ(line_of("%%MatrixMarket matrix coordinate real general\n% c\n2 2 1\n3 1 1\n"), 4);
    EXPECT_EQ(line_of("%%MatrixMarket matrix array real general\n2 2\n1\n2\nx\n"), 5);
}

TEST(Sidecar, RoundTrip) {
    const SparseDigraph g = ensemble::generate_regular_cyclic({12, 2, 3, -0.5}, 2);
    const SparseDigraph back = io::digraph_from_sidecar(io::cycle_sidecar(g));
    EXPECT_EQ(back.n, g.n);
    EXPECT_EQ(back.cycles, g.cycles);
    EXPECT_EQ(back.cycle_weights, g.cycle_weights);
    EXPECT_EQ(ensemble::adjacency_matrix(back), ensemble::adjacency_matrix(g));
    EXPECT_THROW(io::digraph_from_sidecar(nlohmann::json{{"n", 3}}), InvalidInput);
}

TEST(MatrixMarket, FileRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "trochoid_mm_roundtrip.mtx";
    const DenseMatrix m = ensemble::generate_base_iid(4, 1);
    io::write_file(path, m);
    EXPECT_EQ(io::read_matrix_file(path), m);
    std::filesystem::remove(path);
    EXPECT_THROW(io::read_matrix_file(path), IoError);
}

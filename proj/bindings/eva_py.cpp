// Python bindings for the secure matrix protocols: numpy arrays in, shares
// and communication stats out. Sessions run in-process.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eva/bench.hpp"
#include "eva/linalg.hpp"
#include "eva/metrics.hpp"

namespace py = pybind11;
using namespace eva;

namespace {

using NpArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const NpArray& arr) {
    if (arr.ndim() != 2) throw ShapeError("expected a 2-D float64 array");
    const auto rows = static_cast<std::size_t>(arr.shape(0));
    const auto cols = static_cast<std::size_t>(arr.shape(1));
    std::vector<double> data(arr.data(), arr.data() + rows * cols);
    return Matrix(rows, cols, std::move(data));
}

py::array from_matrix(const Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), out.mutable_data());
    return out;
}

RunOptions make_options(std::uint64_t seed, int delta, std::size_t verify_rounds) {
    RunOptions opts;
    opts.seed = seed;
    opts.range = DynamicRange(delta);
    opts.verify.rounds = verify_rounds;
    return opts;
}

py::dict run_to_dict(const ProtocolRun& run) {
    py::dict d;
    py::list shares;
    for (const Matrix& v : run.shares) shares.append(from_matrix(v));
    d["shares"] = shares;
    d["sum"] = from_matrix(run.sum);
    d["accepted"] = run.accepted;
    d["rounds"] = run.stats.rounds();
    d["payload_bytes"] = run.stats.payload_bytes();
    d["header_bytes"] = run.stats.total.header_bytes;
    return d;
}

}  // namespace

PYBIND11_MODULE(_eva, m) {
    m.doc() = "Secure 2/3-party matrix multiplication, inversion and regression";

    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
    py::register_exception<SingularMatrixError>(m, "SingularMatrixError", PyExc_ArithmeticError);
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_ValueError);

    m.def(
        "s2pm",
        [](const NpArray& a, const NpArray& b, std::uint64_t seed, int delta,
           std::size_t verify_rounds) {
            return run_to_dict(
                run_s2pm(to_matrix(a), to_matrix(b), make_options(seed, delta, verify_rounds)));
        },
        py::arg("a"), py::arg("b"), py::arg("seed") = 1, py::arg("delta") = 4,
        py::arg("verify_rounds") = 20,
        "Additive shares of a @ b across two parties with verification.");

    m.def(
        "s3pm",
        [](const NpArray& a, const NpArray& b, const NpArray& c, std::uint64_t seed, int delta,
           std::size_t verify_rounds) {
            return run_to_dict(run_s3pm(to_matrix(a), to_matrix(b), to_matrix(c),
                                        make_options(seed, delta, verify_rounds)));
        },
        py::arg("a"), py::arg("b"), py::arg("c"), py::arg("seed") = 1, py::arg("delta") = 4,
        py::arg("verify_rounds") = 20,
        "Additive shares of a @ b @ c across three parties.");

    m.def(
        "s2pi",
        [](const NpArray& a, const NpArray& b, std::uint64_t seed, int delta,
           std::size_t verify_rounds) {
            return run_to_dict(
                run_s2pi(to_matrix(a), to_matrix(b), make_options(seed, delta, verify_rounds)));
        },
        py::arg("a"), py::arg("b"), py::arg("seed") = 1, py::arg("delta") = 4,
        py::arg("verify_rounds") = 20,
        "Additive shares of inv(a + b).");

    m.def(
        "s2phm",
        [](const NpArray& a1, const NpArray& a2, const NpArray& b1, const NpArray& b2,
           std::uint64_t seed, int delta, std::size_t verify_rounds) {
            return run_to_dict(run_s2phm(to_matrix(a1), to_matrix(a2), to_matrix(b1),
                                         to_matrix(b2), make_options(seed, delta, verify_rounds)));
        },
        py::arg("a1"), py::arg("a2"), py::arg("b1"), py::arg("b2"), py::arg("seed") = 1,
        py::arg("delta") = 4, py::arg("verify_rounds") = 20,
        "Additive shares of (a1 + b1) @ (a2 + b2).");

    m.def(
        "s3phm",
        [](const NpArray& a1, const NpArray& a2, const NpArray& b1, const NpArray& b2,
           const NpArray& c, std::uint64_t seed, int delta, std::size_t verify_rounds) {
            return run_to_dict(run_s3phm(to_matrix(a1), to_matrix(a2), to_matrix(b1),
                                         to_matrix(b2), to_matrix(c),
                                         make_options(seed, delta, verify_rounds)));
        },
        py::arg("a1"), py::arg("a2"), py::arg("b1"), py::arg("b2"), py::arg("c"),
        py::arg("seed") = 1, py::arg("delta") = 4, py::arg("verify_rounds") = 20,
        "Additive shares of (a1 + b1) @ (a2 + b2) @ c.");

    m.def(
        "s3plrt",
        [](const NpArray& x1, const NpArray& x2, const NpArray& y, std::uint64_t seed,
           int delta, std::size_t verify_rounds) {
            return run_to_dict(run_s3plrt(to_matrix(x1), to_matrix(x2), to_matrix(y),
                                          make_options(seed, delta, verify_rounds)));
        },
        py::arg("x1"), py::arg("x2"), py::arg("y"), py::arg("seed") = 1, py::arg("delta") = 0,
        py::arg("verify_rounds") = 20,
        "Train vertically partitioned linear regression; shares sum to beta.");

    m.def(
        "s3plrp",
        [](const NpArray& x1, const NpArray& x2, const NpArray& b1, const NpArray& b2,
           const NpArray& b3, std::uint64_t seed, int delta, std::size_t verify_rounds) {
            return run_to_dict(run_s3plrp(to_matrix(x1), to_matrix(x2), to_matrix(b1),
                                          to_matrix(b2), to_matrix(b3),
                                          make_options(seed, delta, verify_rounds)));
        },
        py::arg("x1"), py::arg("x2"), py::arg("beta1"), py::arg("beta2"), py::arg("beta3"),
        py::arg("seed") = 1, py::arg("delta") = 0, py::arg("verify_rounds") = 20,
        "Predict from model shares; shares sum to y_hat.");

    m.def(
        "vertical_split",
        [](const NpArray& features, const NpArray& labels, std::size_t first_cols) {
            const VerticalDataset ds =
                vertical_split(to_matrix(features), to_matrix(labels), first_cols);
            py::dict d;
            d["x1"] = from_matrix(ds.x1);
            d["x2"] = from_matrix(ds.x2);
            d["y"] = from_matrix(ds.y);
            return d;
        },
        py::arg("features"), py::arg("labels"), py::arg("first_cols"),
        "Zero-padded vertical split with the intercept column in x1.");

    m.def(
        "comm_audit",
        [](std::size_t n, std::uint64_t seed) {
            py::list rows;
            for (const AuditRow& row : comm_audit(n, seed)) {
                py::dict d;
                d["protocol"] = row.protocol;
                d["rounds"] = row.rounds;
                d["rounds_expected"] = row.rounds_expected;
                d["payload_bytes"] = row.payload;
                d["payload_expected"] = row.payload_expected;
                d["pass"] = row.pass;
                rows.append(d);
            }
            return rows;
        },
        py::arg("n") = 10, py::arg("seed") = 1,
        "Ledger-vs-closed-form communication audit rows.");

    m.attr("__version__") = "0.1.0";
}

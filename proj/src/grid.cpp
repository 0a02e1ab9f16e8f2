#include "fgf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "fgf/error.hpp"
#include "fgf/format.hpp"

namespace fgf {

LatticeDomain::LatticeDomain(ShapePtr shape, double h) : shape_(std::move(shape)), h_(h) {
    if (!(h_ > 0)) throw Error("build_domain: spacing h must be positive");
    dim_ = shape_->dim();
    std::vector<double> lo, hi;
    shape_->bounds(lo, hi);

    std::vector<int> mlo(dim_), mhi(dim_);
    for (int j = 0; j < dim_; ++j) {
        mlo[j] = static_cast<int>(std::floor(lo[j] / h_)) - 1;
        mhi[j] = static_cast<int>(std::ceil(hi[j] / h_)) + 1;
    }

    // Lexicographic scan over the candidate index box.
    std::vector<int> m = mlo;
    std::vector<double> x(dim_);
    while (true) {
        for (int j = 0; j < dim_; ++j) x[j] = h_ * m[j];
        if (shape_->contains(x)) sites_.push_back(m);
        int j = dim_ - 1;
        while (j >= 0 && ++m[j] > mhi[j]) {
            m[j] = mlo[j];
            --j;
        }
        if (j < 0) break;
    }
    if (sites_.empty())
        throw Error("build_domain: empty domain (no interior lattice point for " +
                    shape_->describe() + " at h=" + format_double(h_) + ")");

    bbox_lo_ = sites_.front();
    bbox_hi_ = sites_.front();
    for (const auto& s : sites_)
        for (int j = 0; j < dim_; ++j) {
            bbox_lo_[j] = std::min(bbox_lo_[j], s[j]);
            bbox_hi_[j] = std::max(bbox_hi_[j], s[j]);
        }
}

std::vector<double> LatticeDomain::coordinate(int i) const {
    std::vector<double> x(dim_);
    for (int j = 0; j < dim_; ++j) x[j] = h_ * sites_[i][j];
    return x;
}

int LatticeDomain::find(const std::vector<int>& m) const {
    auto it = std::lower_bound(sites_.begin(), sites_.end(), m);
    if (it != sites_.end() && *it == m) return static_cast<int>(it - sites_.begin());
    return -1;
}

DomainPtr build_domain(ShapePtr shape, double h) {
    return std::make_shared<LatticeDomain>(std::move(shape), h);
}

PeriodicBox::PeriodicBox(int dim, double h, int sites_per_axis, std::vector<int> origin)
    : dim_(dim), h_(h), n_(sites_per_axis), origin_(std::move(origin)) {
    if (dim_ < 1) throw Error("PeriodicBox: dimension must be positive");
    if (!(h_ > 0)) throw Error("PeriodicBox: spacing must be positive");
    if (n_ < 2 || n_ % 2 != 0) throw Error("PeriodicBox: sites per axis must be even and >= 2");
    if (static_cast<int>(origin_.size()) != dim_) throw Error("PeriodicBox: origin size mismatch");
    count_ = 1;
    for (int j = 0; j < dim_; ++j) count_ *= n_;
}

std::vector<double> PeriodicBox::coordinate(long flat) const {
    std::vector<int> j = unflatten(flat);
    std::vector<double> x(dim_);
    for (int a = 0; a < dim_; ++a) x[a] = h_ * (origin_[a] + j[a]);
    return x;
}

std::vector<int> PeriodicBox::unflatten(long flat) const {
    std::vector<int> j(dim_);
    for (int a = dim_ - 1; a >= 0; --a) {
        j[a] = static_cast<int>(flat % n_);
        flat /= n_;
    }
    return j;
}

long PeriodicBox::flatten(const std::vector<int>& j) const {
    long flat = 0;
    for (int a = 0; a < dim_; ++a) flat = flat * n_ + j[a];
    return flat;
}

BoxPtr make_embedding_box(const LatticeDomain& dom, double pad_factor) {
    int d = dom.dim();
    double h = dom.spacing();
    int max_extent = 0;
    for (int j = 0; j < d; ++j)
        max_extent = std::max(max_extent, dom.bbox_hi()[j] - dom.bbox_lo()[j]);
    long n = std::lround(std::ceil(pad_factor * (max_extent + 1)));
    n = std::max<long>(n, max_extent + 3);
    if (n % 2 != 0) ++n;
    std::vector<int> origin(d);
    for (int j = 0; j < d; ++j) {
        int extent = dom.bbox_hi()[j] - dom.bbox_lo()[j];
        origin[j] = dom.bbox_lo()[j] - static_cast<int>((n - extent) / 2);
    }
    return std::make_shared<PeriodicBox>(d, h, static_cast<int>(n), std::move(origin));
}

GridFunction::GridFunction(DomainPtr dom, Eigen::VectorXd v)
    : domain(std::move(dom)), values(std::move(v)) {
    if (values.size() != domain->site_count())
        throw Error("GridFunction: value count does not match site count");
    if (!values.allFinite()) throw Error("GridFunction: values must be finite");
}

GridFunction GridFunction::zero(DomainPtr dom) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dom->site_count());
    return GridFunction(std::move(dom), std::move(v));
}

BoxFunction::BoxFunction(BoxPtr b, Eigen::VectorXd v) : box(std::move(b)), values(std::move(v)) {
    if (values.size() != box->site_count())
        throw Error("BoxFunction: value count does not match site count");
    if (!values.allFinite()) throw Error("BoxFunction: values must be finite");
}

BoxFunction BoxFunction::zero(BoxPtr b) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(b->site_count());
    return BoxFunction(std::move(b), std::move(v));
}

namespace {
void check_same_domain(const LatticeDomain& a, const LatticeDomain& b) {
    if (&a == &b) return;
    if (a.dim() != b.dim() || a.spacing() != b.spacing() || a.sites() != b.sites())
        throw Error("l2h_inner: mismatched domains");
}
}  // namespace

double l2h_inner(const GridFunction& u, const GridFunction& v) {
    check_same_domain(*u.domain, *v.domain);
    double hd = std::pow(u.domain->spacing(), u.domain->dim());
    return hd * u.values.dot(v.values);
}

double l2h_inner(const BoxFunction& u, const BoxFunction& v) {
    if (u.box != v.box &&
        (u.box->dim() != v.box->dim() || u.box->spacing() != v.box->spacing() ||
         u.box->sites_per_axis() != v.box->sites_per_axis()))
        throw Error("l2h_inner: mismatched boxes");
    double hd = std::pow(u.box->spacing(), u.box->dim());
    return hd * u.values.dot(v.values);
}

BoxFunction embed(const GridFunction& u, BoxPtr box) {
    const LatticeDomain& dom = *u.domain;
    if (dom.dim() != box->dim()) throw Error("embed: dimension mismatch");
    if (dom.spacing() != box->spacing()) throw Error("embed: spacing mismatch");
    int need = 0;
    for (int j = 0; j < dom.dim(); ++j)
        need = std::max(need, dom.bbox_hi()[j] - dom.bbox_lo()[j] + 3);
    if (need % 2 != 0) ++need;
    for (int j = 0; j < dom.dim(); ++j) {
        int lo = dom.bbox_lo()[j] - box->origin()[j];
        int hi = dom.bbox_hi()[j] - box->origin()[j];
        if (lo < 0 || hi >= box->sites_per_axis())
            throw Error("embed: box too small for domain, need n >= " + std::to_string(need) +
                        " sites per axis covering the bounding box");
    }
    BoxFunction out = BoxFunction::zero(box);
    std::vector<int> j(dom.dim());
    for (int i = 0; i < dom.site_count(); ++i) {
        for (int a = 0; a < dom.dim(); ++a) j[a] = dom.site(i)[a] - box->origin()[a];
        out.values[box->flatten(j)] = u.values[i];
    }
    return out;
}

GridFunction restrict_to_domain(const BoxFunction& u, DomainPtr dom) {
    if (dom->dim() != u.box->dim() || dom->spacing() != u.box->spacing())
        throw Error("restrict: box/domain mismatch");
    GridFunction out = GridFunction::zero(dom);
    std::vector<int> j(dom->dim());
    for (int i = 0; i < dom->site_count(); ++i) {
        for (int a = 0; a < dom->dim(); ++a) {
            j[a] = dom->site(i)[a] - u.box->origin()[a];
            if (j[a] < 0 || j[a] >= u.box->sites_per_axis())
                throw Error("restrict: domain site outside box");
        }
        out.values[i] = u.values[u.box->flatten(j)];
    }
    return out;
}

void dump_grid_function(const GridFunction& u, std::ostream& os) {
    const LatticeDomain& dom = *u.domain;
    os << "# gridfunction d=" << dom.dim() << " h=" << format_double(dom.spacing())
       << " sites=" << dom.site_count() << "\n";
    for (int i = 0; i < dom.site_count(); ++i) {
        for (int j = 0; j < dom.dim(); ++j) os << dom.site(i)[j] << " ";
        os << format_double(u.values[i]) << "\n";
    }
}

GridFunction load_grid_function(std::istream& is, ShapePtr shape) {
    std::string header;
    std::getline(is, header);
    int d = 0, count = 0;
    double h = 0;
    if (std::sscanf(header.c_str(), "# gridfunction d=%d h=%lf sites=%d", &d, &h, &count) != 3)
        throw Error("load_grid_function: bad header '" + header + "'");
    DomainPtr dom = build_domain(std::move(shape), h);
    if (dom->dim() != d || dom->site_count() != count)
        throw Error("load_grid_function: shape/header mismatch");
    Eigen::VectorXd v(count);
    std::vector<int> m(d);
    for (int i = 0; i < count; ++i) {
        std::string line;
        if (!std::getline(is, line)) throw Error("load_grid_function: truncated file");
        std::istringstream ls(line);
        for (int j = 0; j < d; ++j) ls >> m[j];
        double val;
        ls >> val;
        if (!ls) throw Error("load_grid_function: bad row '" + line + "'");
        if (m != dom->site(i)) throw Error("load_grid_function: site order mismatch");
        v[i] = val;
    }
    return GridFunction(dom, std::move(v));
}

}  // namespace fgf

#include "fgf/shape.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "fgf/error.hpp"

namespace fgf {

namespace {

class BoxShape final : public Shape {
public:
    BoxShape(std::vector<double> lo, std::vector<double> hi)
        : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (lo_.empty() || lo_.size() != hi_.size())
            throw Error("box: need matching lo/hi per axis");
        for (size_t j = 0; j < lo_.size(); ++j)
            if (!(lo_[j] < hi_[j])) throw Error("box: lo must be < hi on every axis");
    }
    int dim() const override { return static_cast<int>(lo_.size()); }
    bool contains(std::span<const double> x) const override {
        for (size_t j = 0; j < lo_.size(); ++j)
            if (!(x[j] > lo_[j] && x[j] < hi_[j])) return false;
        return true;
    }
    void bounds(std::vector<double>& lo, std::vector<double>& hi) const override {
        lo = lo_;
        hi = hi_;
    }
    std::string describe() const override {
        std::ostringstream os;
        os << "box(";
        for (size_t j = 0; j < lo_.size(); ++j)
            os << (j ? "," : "") << lo_[j] << "," << hi_[j];
        os << ")";
        return os.str();
    }

private:
    std::vector<double> lo_, hi_;
};

class BallShape final : public Shape {
public:
    BallShape(std::vector<double> center, double radius)
        : c_(std::move(center)), r_(radius) {
        if (c_.empty()) throw Error("ball: empty center");
        if (!(r_ > 0)) throw Error("ball: radius must be positive");
    }
    int dim() const override { return static_cast<int>(c_.size()); }
    bool contains(std::span<const double> x) const override {
        double d2 = 0;
        for (size_t j = 0; j < c_.size(); ++j) d2 += (x[j] - c_[j]) * (x[j] - c_[j]);
        return d2 < r_ * r_;
    }
    void bounds(std::vector<double>& lo, std::vector<double>& hi) const override {
        lo.resize(c_.size());
        hi.resize(c_.size());
        for (size_t j = 0; j < c_.size(); ++j) {
            lo[j] = c_[j] - r_;
            hi[j] = c_[j] + r_;
        }
    }
    std::string describe() const override {
        std::ostringstream os;
        os << "ball(";
        for (size_t j = 0; j < c_.size(); ++j) os << (j ? "," : "") << c_[j];
        os << ";" << r_ << ")";
        return os.str();
    }

private:
    std::vector<double> c_;
    double r_;
};

class BoolShape final : public Shape {
public:
    enum Op { Union, Intersection };
    BoolShape(Op op, ShapePtr a, ShapePtr b) : op_(op), a_(std::move(a)), b_(std::move(b)) {
        if (a_->dim() != b_->dim()) throw Error("boolean shape: operand dimensions differ");
    }
    int dim() const override { return a_->dim(); }
    bool contains(std::span<const double> x) const override {
        return op_ == Union ? (a_->contains(x) || b_->contains(x))
                            : (a_->contains(x) && b_->contains(x));
    }
    void bounds(std::vector<double>& lo, std::vector<double>& hi) const override {
        std::vector<double> lo2, hi2;
        a_->bounds(lo, hi);
        b_->bounds(lo2, hi2);
        for (size_t j = 0; j < lo.size(); ++j) {
            if (op_ == Union) {
                lo[j] = std::min(lo[j], lo2[j]);
                hi[j] = std::max(hi[j], hi2[j]);
            } else {
                lo[j] = std::max(lo[j], lo2[j]);
                hi[j] = std::min(hi[j], hi2[j]);
            }
        }
    }
    std::string describe() const override {
        return std::string(op_ == Union ? "union(" : "intersect(") + a_->describe() + ";" +
               b_->describe() + ")";
    }

private:
    Op op_;
    ShapePtr a_, b_;
};

struct Cursor {
    const std::string& s;
    size_t pos = 0;
    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw Error("shape parse: expected '" + std::string(1, c) + "' in '" + s + "'");
    }
    std::string ident() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
        return s.substr(start, pos - start);
    }
    double number() {
        skip_ws();
        size_t consumed = 0;
        double v;
        try {
            v = std::stod(s.substr(pos), &consumed);
        } catch (const std::exception&) {
            throw Error("shape parse: expected number at '" + s.substr(pos) + "'");
        }
        pos += consumed;
        return v;
    }
};

ShapePtr parse_expr(Cursor& c) {
    std::string name = c.ident();
    c.expect('(');
    if (name == "box") {
        std::vector<double> nums{c.number()};
        while (c.eat(',')) nums.push_back(c.number());
        c.expect(')');
        if (nums.size() % 2 != 0) throw Error("box: need lo,hi pairs per axis");
        std::vector<double> lo, hi;
        for (size_t j = 0; j < nums.size(); j += 2) {
            lo.push_back(nums[j]);
            hi.push_back(nums[j + 1]);
        }
        return make_box(std::move(lo), std::move(hi));
    }
    if (name == "ball") {
        std::vector<double> center{c.number()};
        while (c.eat(',')) center.push_back(c.number());
        c.expect(';');
        double r = c.number();
        c.expect(')');
        return make_ball(std::move(center), r);
    }
    if (name == "union" || name == "intersect") {
        ShapePtr a = parse_expr(c);
        c.expect(';');
        ShapePtr b = parse_expr(c);
        c.expect(')');
        return name == "union" ? make_union(a, b) : make_intersection(a, b);
    }
    throw Error("shape parse: unknown shape '" + name + "'");
}

}  // namespace

ShapePtr make_box(std::vector<double> lo, std::vector<double> hi) {
    return std::make_shared<BoxShape>(std::move(lo), std::move(hi));
}

ShapePtr make_ball(std::vector<double> center, double radius) {
    return std::make_shared<BallShape>(std::move(center), radius);
}

ShapePtr make_union(ShapePtr a, ShapePtr b) {
    return std::make_shared<BoolShape>(BoolShape::Union, std::move(a), std::move(b));
}

ShapePtr make_intersection(ShapePtr a, ShapePtr b) {
    return std::make_shared<BoolShape>(BoolShape::Intersection, std::move(a), std::move(b));
}

ShapePtr parse_shape(const std::string& text) {
    Cursor c{text};
    ShapePtr s = parse_expr(c);
    c.skip_ws();
    if (c.pos != text.size()) throw Error("shape parse: trailing input in '" + text + "'");
    return s;
}

}  // namespace fgf

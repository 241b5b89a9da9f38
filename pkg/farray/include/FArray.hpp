// FArray: non-owning array views with Fortran semantics.
//
// Translated C++ code frequently has to touch buffers that were laid out
// by (or for) Fortran: 1-based indices, first index varying fastest
// (column-major). These views cast a raw pointer to an N-dimensional
// array with exactly those conventions so the translated access patterns
// can stay textually close to the original source.
//
// The views never allocate or free: the caller owns the buffer and must
// keep at least extent1 * ... * extentN elements alive.
//
// Bounds checking: enabled whenever FARRAY_BOUNDS_CHECK is 1 (the default
// for non-NDEBUG builds). A violation prints the class, the offending
// index tuple, and the extents to stderr, then aborts. Release builds
// (NDEBUG) compile the checks out; extent validation at construction is
// always on because it is paid once, not per access.

#ifndef FARRAY_HPP
#define FARRAY_HPP

#include <cstdio>
#include <cstdlib>

#ifndef FARRAY_BOUNDS_CHECK
#ifdef NDEBUG
#define FARRAY_BOUNDS_CHECK 0
#else
#define FARRAY_BOUNDS_CHECK 1
#endif
#endif

namespace farray_detail {

[[noreturn]] inline void extent_abort(const char* cls, int dim, int value) {
    std::fprintf(stderr, "%s: invalid extent n%d = %d (extents must be positive)\n",
                 cls, dim, value);
    std::abort();
}

inline void require_extent(const char* cls, int dim, int value) {
    if (value <= 0) {
        extent_abort(cls, dim, value);
    }
}

[[noreturn]] inline void bounds_abort(const char* cls, const int* idx,
                                      const int* ext, int rank) {
    std::fprintf(stderr, "%s: index (", cls);
    for (int k = 0; k < rank; ++k) {
        std::fprintf(stderr, "%s%d", k ? ", " : "", idx[k]);
    }
    std::fprintf(stderr, ") out of bounds for extents (");
    for (int k = 0; k < rank; ++k) {
        std::fprintf(stderr, "%s%d", k ? ", " : "", ext[k]);
    }
    std::fprintf(stderr, ")\n");
    std::abort();
}

}  // namespace farray_detail

template <typename T>
class FArray1D {
public:
    FArray1D(T* data, int n1) : data_(data), n1_(n1) {
        farray_detail::require_extent("FArray1D", 1, n1);
    }

    T& operator()(int i1) { return data_[offset(i1)]; }
    const T& operator()(int i1) const { return data_[offset(i1)]; }

    int extent(int dim) const { return dim == 1 ? n1_ : 0; }
    long size() const { return n1_; }
    T* data() const { return data_; }

private:
    long offset(int i1) const {
#if FARRAY_BOUNDS_CHECK
        if (i1 < 1 || i1 > n1_) {
            const int idx[] = {i1};
            const int ext[] = {n1_};
            farray_detail::bounds_abort("FArray1D", idx, ext, 1);
        }
#endif
        return static_cast<long>(i1 - 1);
    }

    T* data_;
    int n1_;
};

template <typename T>
class FArray2D {
public:
    FArray2D(T* data, int n1, int n2) : data_(data), n1_(n1), n2_(n2) {
        farray_detail::require_extent("FArray2D", 1, n1);
        farray_detail::require_extent("FArray2D", 2, n2);
    }

    T& operator()(int i1, int i2) { return data_[offset(i1, i2)]; }
    const T& operator()(int i1, int i2) const { return data_[offset(i1, i2)]; }

    int extent(int dim) const { return dim == 1 ? n1_ : dim == 2 ? n2_ : 0; }
    long size() const { return static_cast<long>(n1_) * n2_; }
    T* data() const { return data_; }

private:
    long offset(int i1, int i2) const {
#if FARRAY_BOUNDS_CHECK
        if (i1 < 1 || i1 > n1_ || i2 < 1 || i2 > n2_) {
            const int idx[] = {i1, i2};
            const int ext[] = {n1_, n2_};
            farray_detail::bounds_abort("FArray2D", idx, ext, 2);
        }
#endif
        return static_cast<long>(i1 - 1)
             + static_cast<long>(n1_) * (i2 - 1);
    }

    T* data_;
    int n1_, n2_;
};

template <typename T>
class FArray3D {
public:
    FArray3D(T* data, int n1, int n2, int n3)
        : data_(data), n1_(n1), n2_(n2), n3_(n3) {
        farray_detail::require_extent("FArray3D", 1, n1);
        farray_detail::require_extent("FArray3D", 2, n2);
        farray_detail::require_extent("FArray3D", 3, n3);
    }

    T& operator()(int i1, int i2, int i3) { return data_[offset(i1, i2, i3)]; }
    const T& operator()(int i1, int i2, int i3) const {
        return data_[offset(i1, i2, i3)];
    }

    int extent(int dim) const {
        switch (dim) {
            case 1: return n1_;
            case 2: return n2_;
            case 3: return n3_;
            default: return 0;
        }
    }
    long size() const { return static_cast<long>(n1_) * n2_ * n3_; }
    T* data() const { return data_; }

private:
    long offset(int i1, int i2, int i3) const {
#if FARRAY_BOUNDS_CHECK
        if (i1 < 1 || i1 > n1_ || i2 < 1 || i2 > n2_ || i3 < 1 || i3 > n3_) {
            const int idx[] = {i1, i2, i3};
            const int ext[] = {n1_, n2_, n3_};
            farray_detail::bounds_abort("FArray3D", idx, ext, 3);
        }
#endif
        return static_cast<long>(i1 - 1)
             + static_cast<long>(n1_) * ((i2 - 1)
             + static_cast<long>(n2_) * (i3 - 1));
    }

    T* data_;
    int n1_, n2_, n3_;
};

template <typename T>
class FArray4D {
public:
    FArray4D(T* data, int n1, int n2, int n3, int n4)
        : data_(data), n1_(n1), n2_(n2), n3_(n3), n4_(n4) {
        farray_detail::require_extent("FArray4D", 1, n1);
        farray_detail::require_extent("FArray4D", 2, n2);
        farray_detail::require_extent("FArray4D", 3, n3);
        farray_detail::require_extent("FArray4D", 4, n4);
    }

    T& operator()(int i1, int i2, int i3, int i4) {
        return data_[offset(i1, i2, i3, i4)];
    }
    const T& operator()(int i1, int i2, int i3, int i4) const {
        return data_[offset(i1, i2, i3, i4)];
    }

    int extent(int dim) const {
        switch (dim) {
            case 1: return n1_;
            case 2: return n2_;
            case 3: return n3_;
            case 4: return n4_;
            default: return 0;
        }
    }
    long size() const { return static_cast<long>(n1_) * n2_ * n3_ * n4_; }
    T* data() const { return data_; }

private:
    long offset(int i1, int i2, int i3, int i4) const {
#if FARRAY_BOUNDS_CHECK
        if (i1 < 1 || i1 > n1_ || i2 < 1 || i2 > n2_ ||
            i3 < 1 || i3 > n3_ || i4 < 1 || i4 > n4_) {
            const int idx[] = {i1, i2, i3, i4};
            const int ext[] = {n1_, n2_, n3_, n4_};
            farray_detail::bounds_abort("FArray4D", idx, ext, 4);
        }
#endif
        return static_cast<long>(i1 - 1)
             + static_cast<long>(n1_) * ((i2 - 1)
             + static_cast<long>(n2_) * ((i3 - 1)
             + static_cast<long>(n3_) * (i4 - 1)));
    }

    T* data_;
    int n1_, n2_, n3_, n4_;
};

#endif  // FARRAY_HPP

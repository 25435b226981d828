// ww-full-typeof; mangling: eps -> E
#define typeof decltype
struct E {};
template<typename x1> struct A {};
template<typename x1> struct B {};
template<typename x1> struct S {};
A<E> a() {}
B<E> b() {}
template<typename x1> A<x1> a(x1) {}
template<typename x1> B<x1> b(x1) {}
template<typename x1> S<x1> s(x1) {}
template<typename x1> auto $(A<x1>) { return match_a($(x1())); }
template<typename x1> auto $(B<x1>) { return match_b($(x1())); }
template<typename x1> auto $(S<x1>) { return reverse(x1()); }
template<typename x1> auto reverse(A<x1>) { return append2end_a(reverse(x1())); }
template<typename x1> auto reverse(B<x1>) { return append2end_b(reverse(x1())); }
E reverse(E) {}
template<typename x1> auto append2end_a(A<x1>) { return append2start_a(append2end_a(x1())); }
template<typename x1> auto append2end_a(B<x1>) { return append2start_b(append2end_a(x1())); }
A<E> append2end_a(E) {}
template<typename x1> auto append2end_b(A<x1>) { return append2start_a(append2end_b(x1())); }
template<typename x1> auto append2end_b(B<x1>) { return append2start_b(append2end_b(x1())); }
B<E> append2end_b(E) {}
template<typename x1> A<x1> append2start_a(x1) {}
template<typename x1> B<x1> append2start_b(x1) {}
template<typename x1> x1 match_a(A<x1>) {}
template<typename x1> x1 match_b(B<x1>) {}

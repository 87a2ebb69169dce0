use netkrig_bench::{gaussian_matrix, inet_like, internet2_like, preferential_attachment};

#[test]
fn shipped_and_generated_shapes() {
    let a = internet2_like().unwrap();
    assert_eq!((a.link_count(), a.flow_count()), (26, 72));
    let b = inet_like(1).unwrap();
    assert_eq!((b.link_count(), b.flow_count()), (480, 100));
    let c = preferential_attachment(100, 2, 500, 7).unwrap();
    assert_eq!((c.link_count(), c.flow_count()), (197, 500));
    assert_eq!(gaussian_matrix(4, 3, 5), gaussian_matrix(4, 3, 5));
}

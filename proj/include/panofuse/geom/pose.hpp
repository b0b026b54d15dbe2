#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace panofuse::geom {

/// Rigid transform placing a spherical camera in the world frame:
/// p_world = rotation * p_camera + translation.
struct Pose {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    static Pose identity() { return Pose{}; }

    Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + translation; }
    Eigen::Vector3d to_camera(const Eigen::Vector3d& p_world) const {
        return rotation.transpose() * (p_world - translation);
    }

    Pose compose(const Pose& other) const {
        Pose out;
        out.rotation = rotation * other.rotation;
        out.translation = rotation * other.translation + translation;
        return out;
    }

    Pose inverse() const {
        Pose out;
        out.rotation = rotation.transpose();
        out.translation = -(rotation.transpose() * translation);
        return out;
    }

    bool is_rigid(double tol = 1e-9) const {
        Eigen::Matrix3d err = rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
        return err.cwiseAbs().maxCoeff() < tol && rotation.determinant() > 0.0;
    }
};

inline Pose translate_pose(const Pose& pose, const Eigen::Vector3d& v) {
    Pose out = pose;
    out.translation += v;
    return out;
}

}  // namespace panofuse::geom
